#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ifp/grid.hpp"

namespace ifp {

/// Imaging system parameters. Units: millimeters for the aperture and focal
/// length, nanometers for the wavelength, micrometers for the pixel pitch.
struct OpticalConfig {
  double aperture_diameter_mm = 10.0;
  double focal_length_mm = 300.0;
  double wavelength_nm = 632.0;
  double pixel_pitch_um = 3.45;

  /// Throws InvalidArgument unless every field is finite and positive.
  void validate() const;

  /// Incoherent cutoff D / (lambda f), cycles per millimeter.
  double cutoff_frequency() const;

  /// Detector sampling frequency 1 / pitch, cycles per millimeter.
  double sampling_frequency() const;

  /// True when the detector samples at least twice the incoherent cutoff.
  bool nyquist_sampled() const { return sampling_frequency() >= 2.0 * cutoff_frequency(); }
};

/// Diffraction-limited incoherent OTF on a DFT-layout frequency grid.
struct OpticalModel {
  ImageGrid otf;
  double cutoff_frequency = 0.0;  // cycles/mm
};

/// Clear circular pupil autocorrelation, (2/pi)[acos(r) - r sqrt(1 - r^2)]
/// for normalized radial frequency r, zero for r >= 1.
double circular_pupil_otf(double r);

OpticalModel build_otf(const OpticalConfig& config, std::size_t width, std::size_t height);

/// Speckle intensity in (0, 1]. With correlation_length == 0 the samples are
/// i.i.d. uniform; otherwise the field is Gaussian low-passed with that
/// standard deviation (pixels) and min-max rescaled. Samples never drop below
/// kSpeckleFloor.
ImageGrid generate_speckle(std::uint64_t seed, std::size_t width, std::size_t height, double correlation_length,
                           double pixel_pitch_um = 1.0);

inline constexpr double kSpeckleFloor = 1.0 / 65536.0;

/// Blurs a non-negative intensity through the OTF; negative ringing is clamped.
ImageGrid incoherent_image(const ImageGrid& intensity, const OpticalModel& model);

/// Adds zero-mean Gaussian noise of variance variance_ratio * var(img), then
/// clamps negatives to zero.
ImageGrid add_gaussian_noise(const ImageGrid& img, double variance_ratio, std::uint64_t seed);

/// Centered n x n lattice with the given step, row-major (dy outer, dx inner).
std::vector<ShiftVector> generate_scan_grid(int n_per_side, int step);

struct AcquisitionSet {
  std::vector<ImageGrid> frames;
  std::optional<std::vector<ShiftVector>> true_shifts;
  OpticalConfig config;
  std::uint64_t seed = 0;
};

/// Frame n = noise(blur(object * window(master_speckle, shift n))). The speckle
/// canvas is centered on the object, so shift (0,0) takes its central window.
/// Frame noise streams derive from (seed, n).
AcquisitionSet simulate_acquisition(const ImageGrid& object, const ImageGrid& master_speckle,
                                    const std::vector<ShiftVector>& shifts, const OpticalModel& model,
                                    double variance_ratio, std::uint64_t seed, const OpticalConfig& config = {});

/// Master speckle canvas size that holds every window of a frame for `shifts`
/// when centered: frame + 2 * max|shift| per axis.
std::pair<std::size_t, std::size_t> centered_canvas_size(std::size_t frame_width, std::size_t frame_height,
                                                         const std::vector<ShiftVector>& shifts);

/// A complete simulated scan: the centered speckle canvas, the OTF and the
/// frames it produced.
struct SimulatedScan {
  ImageGrid master_speckle;
  OpticalModel model;
  AcquisitionSet acquisition;
};

/// Generates a speckle canvas sized for `shifts` and simulates the scan.
SimulatedScan simulate_scan(const ImageGrid& object, const OpticalConfig& config,
                            const std::vector<ShiftVector>& shifts, double correlation_length, double variance_ratio,
                            std::uint64_t speckle_seed, std::uint64_t noise_seed);

}  // namespace ifp
