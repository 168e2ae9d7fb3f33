#include "ifp/optics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "ifp/error.hpp"
#include "ifp/rng.hpp"

namespace ifp {

void OpticalConfig::validate() const {
  auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!positive(aperture_diameter_mm)) throw InvalidArgument("aperture diameter must be positive");
  if (!positive(focal_length_mm)) throw InvalidArgument("focal length must be positive");
  if (!positive(wavelength_nm)) throw InvalidArgument("wavelength must be positive");
  if (!positive(pixel_pitch_um)) throw InvalidArgument("pixel pitch must be positive");
}

double OpticalConfig::cutoff_frequency() const {
  return aperture_diameter_mm / (wavelength_nm * 1e-6 * focal_length_mm);
}

double OpticalConfig::sampling_frequency() const { return 1.0 / (pixel_pitch_um * 1e-3); }

double circular_pupil_otf(double r) {
  if (r <= 0.0) return 1.0;
  if (r >= 1.0) return 0.0;
  return (2.0 / std::numbers::pi) * (std::acos(r) - r * std::sqrt(1.0 - r * r));
}

OpticalModel build_otf(const OpticalConfig& config, std::size_t width, std::size_t height) {
  config.validate();
  if (width < 2 || height < 2) throw InvalidArgument("build_otf: grid must be at least 2x2");

  const double cutoff = config.cutoff_frequency();
  const double pitch_mm = config.pixel_pitch_um * 1e-3;
  const double dfx = 1.0 / (static_cast<double>(width) * pitch_mm);
  const double dfy = 1.0 / (static_cast<double>(height) * pitch_mm);

  ImageGrid otf(width, height, config.pixel_pitch_um);
  for (std::size_t y = 0; y < height; ++y) {
    const double fy = static_cast<double>(frequency_index(y, height)) * dfy;
    for (std::size_t x = 0; x < width; ++x) {
      const double fx = static_cast<double>(frequency_index(x, width)) * dfx;
      otf(x, y) = circular_pupil_otf(std::hypot(fx, fy) / cutoff);
    }
  }
  return {std::move(otf), cutoff};
}

ImageGrid generate_speckle(std::uint64_t seed, std::size_t width, std::size_t height, double correlation_length,
                           double pixel_pitch_um) {
  if (!(correlation_length >= 0.0)) throw InvalidArgument("speckle correlation length must be >= 0");

  Rng rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  ImageGrid field(width, height, pixel_pitch_um);
  // 1 - u maps [0,1) onto (0,1].
  for (auto& v : field.samples()) v = std::max(1.0 - uniform(rng), kSpeckleFloor);
  if (correlation_length == 0.0) return field;

  Spectrum spec = fft_forward(field);
  const double s2 = 2.0 * std::numbers::pi * std::numbers::pi * correlation_length * correlation_length;
  for (std::size_t y = 0; y < height; ++y) {
    const double fy = static_cast<double>(frequency_index(y, height)) / static_cast<double>(height);
    for (std::size_t x = 0; x < width; ++x) {
      const double fx = static_cast<double>(frequency_index(x, width)) / static_cast<double>(width);
      spec(x, y) *= std::exp(-s2 * (fx * fx + fy * fy));
    }
  }
  ImageGrid smooth = fft_inverse(spec, pixel_pitch_um);
  const double lo = smooth.min();
  const double hi = smooth.max();
  const double range = hi - lo;
  for (auto& v : smooth.samples()) {
    const double scaled = range > 0.0 ? (v - lo) / range : 1.0;
    v = std::clamp(scaled, kSpeckleFloor, 1.0);
  }
  return smooth;
}

ImageGrid incoherent_image(const ImageGrid& intensity, const OpticalModel& model) {
  if (!intensity.same_shape(model.otf)) throw InvalidArgument("incoherent_image: intensity does not match the OTF grid");
  if (!intensity.non_negative()) throw InvalidArgument("incoherent_image: intensity must be non-negative");

  Spectrum spec = fft_forward(intensity);
  for (std::size_t i = 0; i < spec.size(); ++i) spec[i] *= model.otf[i];
  ImageGrid out = fft_inverse(spec, intensity.pixel_pitch());
  for (auto& v : out.samples()) v = std::max(v, 0.0);
  return out;
}

ImageGrid add_gaussian_noise(const ImageGrid& img, double variance_ratio, std::uint64_t seed) {
  if (!(variance_ratio >= 0.0)) throw InvalidArgument("noise variance ratio must be >= 0");
  if (variance_ratio == 0.0) return img;

  const double mean = img.mean();
  double var = 0.0;
  for (double v : img.samples()) var += (v - mean) * (v - mean);
  var /= static_cast<double>(img.size());

  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, std::sqrt(variance_ratio * var));
  ImageGrid out = img;
  for (auto& v : out.samples()) v = std::max(v + normal(rng), 0.0);
  return out;
}

std::vector<ShiftVector> generate_scan_grid(int n_per_side, int step) {
  if (n_per_side < 1) throw InvalidArgument("scan grid needs at least one position per side");
  if (step < 1) throw InvalidArgument("scan step must be at least one pixel");

  // Even n has no center sample; the lattice then starts at -(n/2) * step.
  const int first = -(n_per_side / 2) * step;
  std::vector<ShiftVector> shifts;
  shifts.reserve(static_cast<std::size_t>(n_per_side * n_per_side));
  for (int iy = 0; iy < n_per_side; ++iy) {
    for (int ix = 0; ix < n_per_side; ++ix) {
      shifts.push_back({first + ix * step, first + iy * step});
    }
  }
  return shifts;
}

std::pair<std::size_t, std::size_t> centered_canvas_size(std::size_t frame_width, std::size_t frame_height,
                                                         const std::vector<ShiftVector>& shifts) {
  std::size_t px = 0;
  std::size_t py = 0;
  for (const auto& s : shifts) {
    px = std::max<std::size_t>(px, static_cast<std::size_t>(std::abs(s.dx)));
    py = std::max<std::size_t>(py, static_cast<std::size_t>(std::abs(s.dy)));
  }
  return {frame_width + 2 * px, frame_height + 2 * py};
}

AcquisitionSet simulate_acquisition(const ImageGrid& object, const ImageGrid& master_speckle,
                                    const std::vector<ShiftVector>& shifts, const OpticalModel& model,
                                    double variance_ratio, std::uint64_t seed, const OpticalConfig& config) {
  if (!object.non_negative()) throw InvalidArgument("simulate_acquisition: object must be non-negative");
  if (!object.same_shape(model.otf)) throw InvalidArgument("simulate_acquisition: object does not match the OTF grid");

  const auto geometry =
      CanvasGeometry::centered(object.width(), object.height(), master_speckle.width(), master_speckle.height());
  for (std::size_t n = 0; n < shifts.size(); ++n) {
    if (!geometry.contains(shifts[n])) {
      throw OutOfRange("simulate_acquisition: shift " + std::to_string(n) + " (" + std::to_string(shifts[n].dx) +
                       ", " + std::to_string(shifts[n].dy) + ") leaves the speckle canvas");
    }
  }

  AcquisitionSet set;
  set.true_shifts = shifts;
  set.config = config;
  set.seed = seed;
  set.frames.reserve(shifts.size());
  for (std::size_t n = 0; n < shifts.size(); ++n) {
    const ImageGrid window =
        window_crop(master_speckle, geometry.window_offset(shifts[n]), object.width(), object.height());
    ImageGrid modulated = object;
    for (std::size_t i = 0; i < modulated.size(); ++i) modulated[i] *= window[i];
    set.frames.push_back(add_gaussian_noise(incoherent_image(modulated, model), variance_ratio,
                                            derive_seed(seed, {0x6e6f697365ULL, n})));
  }
  return set;
}

SimulatedScan simulate_scan(const ImageGrid& object, const OpticalConfig& config,
                            const std::vector<ShiftVector>& shifts, double correlation_length, double variance_ratio,
                            std::uint64_t speckle_seed, std::uint64_t noise_seed) {
  const auto [cw, ch] = centered_canvas_size(object.width(), object.height(), shifts);
  ImageGrid speckle = generate_speckle(speckle_seed, cw, ch, correlation_length, object.pixel_pitch());
  OpticalModel model = build_otf(config, object.width(), object.height());
  AcquisitionSet acquisition =
      simulate_acquisition(object, speckle, shifts, model, variance_ratio, noise_seed, config);
  return {std::move(speckle), std::move(model), std::move(acquisition)};
}

}  // namespace ifp
