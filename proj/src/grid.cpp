#include "ifp/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "ifp/error.hpp"

namespace ifp {

namespace {

void check_shape(std::size_t width, std::size_t height) {
  if (width < 1 || height < 1) {
    throw InvalidArgument("grid dimensions must be at least 1x1, got " + std::to_string(width) + "x" +
                          std::to_string(height));
  }
}

std::string describe(ShiftVector s) {
  return "(" + std::to_string(s.dx) + ", " + std::to_string(s.dy) + ")";
}

void check_window(const ImageGrid& master, ShiftVector offset, std::size_t width, std::size_t height) {
  const bool fits = offset.dx >= 0 && offset.dy >= 0 &&
                    static_cast<std::size_t>(offset.dx) + width <= master.width() &&
                    static_cast<std::size_t>(offset.dy) + height <= master.height();
  if (!fits) {
    throw OutOfRange("window " + std::to_string(width) + "x" + std::to_string(height) + " at offset " +
                     describe(offset) + " exceeds canvas " + std::to_string(master.width()) + "x" +
                     std::to_string(master.height()));
  }
}

}  // namespace

ImageGrid::ImageGrid(std::size_t width, std::size_t height, double pixel_pitch_um, double fill)
    : width_(width), height_(height), pixel_pitch_(pixel_pitch_um) {
  check_shape(width, height);
  if (!(pixel_pitch_um > 0.0) || !std::isfinite(pixel_pitch_um)) {
    throw InvalidArgument("pixel pitch must be positive");
  }
  samples_.assign(width * height, fill);
}

ImageGrid::ImageGrid(std::size_t width, std::size_t height, double pixel_pitch_um, std::vector<double> samples)
    : width_(width), height_(height), pixel_pitch_(pixel_pitch_um), samples_(std::move(samples)) {
  check_shape(width, height);
  if (!(pixel_pitch_um > 0.0) || !std::isfinite(pixel_pitch_um)) {
    throw InvalidArgument("pixel pitch must be positive");
  }
  if (samples_.size() != width * height) {
    throw InvalidArgument("sample count " + std::to_string(samples_.size()) + " does not match " +
                          std::to_string(width) + "x" + std::to_string(height));
  }
}

bool ImageGrid::all_finite() const {
  return std::all_of(samples_.begin(), samples_.end(), [](double v) { return std::isfinite(v); });
}

bool ImageGrid::non_negative() const {
  return std::all_of(samples_.begin(), samples_.end(), [](double v) { return v >= 0.0; });
}

double ImageGrid::sum() const { return std::accumulate(samples_.begin(), samples_.end(), 0.0); }

double ImageGrid::mean() const { return sum() / static_cast<double>(samples_.size()); }

double ImageGrid::max() const { return *std::max_element(samples_.begin(), samples_.end()); }

double ImageGrid::min() const { return *std::min_element(samples_.begin(), samples_.end()); }

Spectrum::Spectrum(std::size_t width, std::size_t height, std::complex<double> fill)
    : width_(width), height_(height) {
  check_shape(width, height);
  samples_.assign(width * height, fill);
}

Spectrum::Spectrum(std::size_t width, std::size_t height, std::vector<std::complex<double>> samples)
    : width_(width), height_(height), samples_(std::move(samples)) {
  check_shape(width, height);
  if (samples_.size() != width * height) {
    throw InvalidArgument("spectrum sample count does not match its dimensions");
  }
}

bool Spectrum::all_finite() const {
  return std::all_of(samples_.begin(), samples_.end(),
                     [](std::complex<double> v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); });
}

ImageGrid window_crop(const ImageGrid& master, ShiftVector offset, std::size_t width, std::size_t height) {
  check_window(master, offset, width, height);
  ImageGrid out(width, height, master.pixel_pitch());
  const auto ox = static_cast<std::size_t>(offset.dx);
  const auto oy = static_cast<std::size_t>(offset.dy);
  for (std::size_t y = 0; y < height; ++y) {
    const auto row = master.samples().subspan((oy + y) * master.width() + ox, width);
    std::copy(row.begin(), row.end(), out.samples().begin() + static_cast<std::ptrdiff_t>(y * width));
  }
  return out;
}

ImageGrid window_accumulate(const ImageGrid& master, ShiftVector offset, const ImageGrid& delta) {
  check_window(master, offset, delta.width(), delta.height());
  ImageGrid out = master;
  const auto ox = static_cast<std::size_t>(offset.dx);
  const auto oy = static_cast<std::size_t>(offset.dy);
  for (std::size_t y = 0; y < delta.height(); ++y) {
    for (std::size_t x = 0; x < delta.width(); ++x) {
      out(ox + x, oy + y) += delta(x, y);
    }
  }
  return out;
}

CanvasGeometry CanvasGeometry::fit(std::size_t frame_width, std::size_t frame_height,
                                   std::span<const ShiftVector> shifts) {
  if (shifts.empty()) {
    throw InvalidArgument("canvas geometry needs at least one shift");
  }
  ShiftVector lo = shifts.front();
  ShiftVector hi = shifts.front();
  for (const auto& s : shifts) {
    lo = {std::min(lo.dx, s.dx), std::min(lo.dy, s.dy)};
    hi = {std::max(hi.dx, s.dx), std::max(hi.dy, s.dy)};
  }
  CanvasGeometry g;
  g.frame_width = frame_width;
  g.frame_height = frame_height;
  g.canvas_width = frame_width + static_cast<std::size_t>(hi.dx - lo.dx);
  g.canvas_height = frame_height + static_cast<std::size_t>(hi.dy - lo.dy);
  g.anchor = hi;
  return g;
}

CanvasGeometry CanvasGeometry::centered(std::size_t frame_width, std::size_t frame_height,
                                        std::size_t canvas_width, std::size_t canvas_height) {
  if (canvas_width < frame_width || canvas_height < frame_height) {
    throw OutOfRange("canvas is smaller than the frame");
  }
  CanvasGeometry g;
  g.frame_width = frame_width;
  g.frame_height = frame_height;
  g.canvas_width = canvas_width;
  g.canvas_height = canvas_height;
  g.anchor = {static_cast<int>((canvas_width - frame_width) / 2),
              static_cast<int>((canvas_height - frame_height) / 2)};
  return g;
}

bool CanvasGeometry::contains(ShiftVector shift) const {
  const ShiftVector o = window_offset(shift);
  return o.dx >= 0 && o.dy >= 0 && static_cast<std::size_t>(o.dx) + frame_width <= canvas_width &&
         static_cast<std::size_t>(o.dy) + frame_height <= canvas_height;
}

}  // namespace ifp
