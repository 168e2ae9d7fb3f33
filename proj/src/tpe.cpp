#include "ifp/tpe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ifp/error.hpp"

namespace ifp {

namespace {

// Zero-mean copy of `img` embedded top-left in a canvas of the given size.
Spectrum zero_mean_spectrum(const ImageGrid& img, std::size_t width, std::size_t height, const char* name) {
  const double mean = img.mean();
  double energy = 0.0;
  for (double v : img.samples()) energy += (v - mean) * (v - mean);
  if (!(energy > 0.0)) {
    throw DegenerateInput(std::string("cross_correlate: input ") + name + " is constant; no correlation peak exists");
  }
  ImageGrid padded(width, height, img.pixel_pitch());
  for (std::size_t y = 0; y < img.height(); ++y) {
    for (std::size_t x = 0; x < img.width(); ++x) padded(x, y) = img(x, y) - mean;
  }
  return fft_forward(padded);
}

ShiftVector centered_lag(std::size_t x, std::size_t y, std::size_t width, std::size_t height) {
  return {static_cast<int>(frequency_index(x, width)), static_cast<int>(frequency_index(y, height))};
}

bool is_local_max(const ImageGrid& s, std::size_t x, std::size_t y) {
  const std::size_t w = s.width();
  const std::size_t h = s.height();
  const double v = s(x, y);
  for (std::size_t oy = h - 1; oy <= h + 1; ++oy) {
    for (std::size_t ox = w - 1; ox <= w + 1; ++ox) {
      if (ox == w && oy == h) continue;
      if (s((x + ox) % w, (y + oy) % h) > v) return false;
    }
  }
  return true;
}

double secondary_peak(const ImageGrid& s, std::size_t px, std::size_t py, double peak_value) {
  const std::size_t w = s.width();
  const std::size_t h = s.height();
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      if (x == px && y == py) continue;
      if (s(x, y) > best && is_local_max(s, x, y)) best = s(x, y);
    }
  }
  if (std::isfinite(best)) return best;

  // No other local maximum: use the largest value outside the peak's 3x3 block.
  auto near = [](std::size_t a, std::size_t b, std::size_t n) {
    const std::size_t d = a > b ? a - b : b - a;
    return d <= 1 || d == n - 1;
  };
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      if (near(x, px, w) && near(y, py, h)) continue;
      best = std::max(best, s(x, y));
    }
  }
  return std::isfinite(best) ? best : peak_value;
}

}  // namespace

ImageGrid mean_image(const std::vector<ImageGrid>& frames) {
  if (frames.empty()) throw InvalidArgument("mean_image: no frames");
  ImageGrid mean(frames.front().width(), frames.front().height(), frames.front().pixel_pitch());
  for (std::size_t n = 0; n < frames.size(); ++n) {
    if (!frames[n].same_shape(mean)) {
      throw InvalidArgument("mean_image: frame " + std::to_string(n) + " has mismatched dimensions");
    }
    for (std::size_t i = 0; i < mean.size(); ++i) mean[i] += frames[n][i];
  }
  const double inv = 1.0 / static_cast<double>(frames.size());
  for (auto& v : mean.samples()) v *= inv;
  return mean;
}

ImageGrid isolate_speckle(const ImageGrid& frame, const ImageGrid& mean, double floor) {
  if (!frame.same_shape(mean)) throw InvalidArgument("isolate_speckle: frame and mean image differ in size");
  if (!(floor > 0.0)) throw InvalidArgument("isolate_speckle: floor must be positive");

  const double lower = floor * mean.max();
  ImageGrid out(frame.width(), frame.height(), frame.pixel_pitch());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double denom = std::max(mean[i], lower);
    // An all-zero mean leaves nothing to divide by; the ratio is then zero.
    out[i] = denom > 0.0 ? frame[i] / denom : 0.0;
  }
  return out;
}

CorrelationSurface cross_correlate(const ImageGrid& a, const ImageGrid& b, CorrelationMode mode) {
  if (!a.same_shape(b)) throw InvalidArgument("cross_correlate: inputs differ in size");

  const std::size_t w = mode == CorrelationMode::padded ? 2 * a.width() : a.width();
  const std::size_t h = mode == CorrelationMode::padded ? 2 * a.height() : a.height();
  const Spectrum fa = zero_mean_spectrum(a, w, h, "a");
  Spectrum fb = zero_mean_spectrum(b, w, h, "b");
  for (std::size_t i = 0; i < fb.size(); ++i) fb[i] *= std::conj(fa[i]);

  CorrelationSurface surface{fft_inverse(fb, a.pixel_pitch()), {}, 0.0, 0.0};
  const ImageGrid& s = surface.values;

  std::size_t px = 0;
  std::size_t py = 0;
  ShiftVector best_lag = centered_lag(0, 0, w, h);
  double best = s(0, 0);
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      const double v = s(x, y);
      const ShiftVector lag = centered_lag(x, y, w, h);
      const bool earlier = lag.dy < best_lag.dy || (lag.dy == best_lag.dy && lag.dx < best_lag.dx);
      if (v > best || (v == best && earlier)) {
        best = v;
        best_lag = lag;
        px = x;
        py = y;
      }
    }
  }
  surface.peak = best_lag;
  surface.peak_value = best;
  surface.secondary_peak_value = secondary_peak(s, px, py, best);
  return surface;
}

ExtractionResult extract_positions(const std::vector<ImageGrid>& frames, const ExtractOptions& options) {
  if (frames.size() < 2) throw InvalidArgument("extract_positions: at least two frames are required");
  if (options.reference_index >= frames.size()) {
    throw InvalidArgument("extract_positions: reference index " + std::to_string(options.reference_index) +
                          " out of range for " + std::to_string(frames.size()) + " frames");
  }

  const ImageGrid mean = mean_image(frames);
  const ImageGrid reference = isolate_speckle(frames[options.reference_index], mean, options.floor);

  ExtractionResult result;
  result.reference_index = options.reference_index;
  result.shifts.resize(frames.size());
  result.confidence.resize(frames.size());
  for (std::size_t n = 0; n < frames.size(); ++n) {
    try {
      const CorrelationSurface c = cross_correlate(reference, isolate_speckle(frames[n], mean, options.floor),
                                                   options.mode);
      result.shifts[n] = n == options.reference_index ? ShiftVector{} : c.peak;
      result.confidence[n] = c.secondary_peak_value > 0.0 ? c.peak_value / c.secondary_peak_value
                                                          : std::numeric_limits<double>::infinity();
    } catch (const Error&) {
      rethrow_with_context("frame " + std::to_string(n));
    }
  }
  return result;
}

}  // namespace ifp
