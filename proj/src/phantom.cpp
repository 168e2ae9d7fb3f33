#include "ifp/phantom.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace ifp {

ImageGrid resolution_chart(std::size_t width, std::size_t height, double pixel_pitch_um, double background) {
  ImageGrid img(width, height, pixel_pitch_um, background);
  const double scale = static_cast<double>(std::min(width, height)) / 256.0;

  // Top half: 4 x 2 cells, each with vertical bars (left) and horizontal bars
  // (right) of one period.
  constexpr std::array<double, 8> periods{2, 3, 4, 5, 6, 8, 10, 12};
  const std::size_t cell_w = std::max<std::size_t>(width / 4, 1);
  const std::size_t cell_h = std::max<std::size_t>(height / 4, 1);
  for (std::size_t c = 0; c < periods.size(); ++c) {
    const double period = std::max(2.0, std::round(periods[c] * scale));
    const std::size_t x0 = (c % 4) * cell_w;
    const std::size_t y0 = (c / 4) * cell_h;
    const std::size_t margin = cell_h / 8;
    for (std::size_t y = y0 + margin; y + margin < y0 + cell_h && y < height; ++y) {
      for (std::size_t x = x0 + margin; x + margin < x0 + cell_w && x < width; ++x) {
        const bool left = x < x0 + cell_w / 2;
        const double u = left ? static_cast<double>(x - x0) : static_cast<double>(y - y0);
        if (left && x + 1 >= x0 + cell_w / 2) continue;  // gap between the two groups
        if (std::fmod(u, period) < period / 2.0) img(x, y) = 1.0;
      }
    }
  }

  // Bottom left: Siemens star.
  const double cx = static_cast<double>(width) * 0.25;
  const double cy = static_cast<double>(height) * 0.75;
  const double radius = 0.22 * static_cast<double>(std::min(width, height));
  constexpr int spokes = 18;
  for (std::size_t y = height / 2; y < height; ++y) {
    for (std::size_t x = 0; x < width / 2; ++x) {
      const double dx = static_cast<double>(x) - cx;
      const double dy = static_cast<double>(y) - cy;
      if (std::hypot(dx, dy) > radius) continue;
      const double phase = (std::atan2(dy, dx) + std::numbers::pi) * spokes / std::numbers::pi;
      if (static_cast<long>(std::floor(phase)) % 2 == 0) img(x, y) = 1.0;
    }
  }

  // Bottom right: concentric rings with a grid of small dots around them.
  const double rx = static_cast<double>(width) * 0.75;
  const double ry = static_cast<double>(height) * 0.75;
  const double ring_period = std::max(3.0, std::round(6.0 * scale));
  const double dot_pitch = std::max(4.0, std::round(9.0 * scale));
  for (std::size_t y = height / 2; y < height; ++y) {
    for (std::size_t x = width / 2; x < width; ++x) {
      const double r = std::hypot(static_cast<double>(x) - rx, static_cast<double>(y) - ry);
      if (r < radius) {
        if (std::fmod(r, ring_period) < ring_period / 2.0) img(x, y) = 1.0;
      } else {
        const double u = std::fmod(static_cast<double>(x), dot_pitch) - dot_pitch / 2.0;
        const double v = std::fmod(static_cast<double>(y), dot_pitch) - dot_pitch / 2.0;
        if (std::hypot(u, v) < dot_pitch / 4.0) img(x, y) = 0.7;
      }
    }
  }
  return img;
}

}  // namespace ifp
