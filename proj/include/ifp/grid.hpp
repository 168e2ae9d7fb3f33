#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace ifp {

/// Integer pixel translation. (dx, dy) moves content +dx along columns and
/// +dy along rows.
struct ShiftVector {
  int dx = 0;
  int dy = 0;

  friend bool operator==(const ShiftVector&, const ShiftVector&) = default;
  friend ShiftVector operator+(ShiftVector a, ShiftVector b) { return {a.dx + b.dx, a.dy + b.dy}; }
  friend ShiftVector operator-(ShiftVector a, ShiftVector b) { return {a.dx - b.dx, a.dy - b.dy}; }
  friend ShiftVector operator-(ShiftVector a) { return {-a.dx, -a.dy}; }
};

/// 2D real field, row-major, with the detector pixel pitch in micrometers.
class ImageGrid {
 public:
  ImageGrid(std::size_t width, std::size_t height, double pixel_pitch_um = 1.0, double fill = 0.0);
  ImageGrid(std::size_t width, std::size_t height, double pixel_pitch_um, std::vector<double> samples);

  std::size_t width() const { return width_; }
  std::size_t height() const { return height_; }
  std::size_t size() const { return samples_.size(); }
  double pixel_pitch() const { return pixel_pitch_; }

  double operator()(std::size_t x, std::size_t y) const { return samples_[y * width_ + x]; }
  double& operator()(std::size_t x, std::size_t y) { return samples_[y * width_ + x]; }
  double operator[](std::size_t i) const { return samples_[i]; }
  double& operator[](std::size_t i) { return samples_[i]; }

  std::span<const double> samples() const { return samples_; }
  std::span<double> samples() { return samples_; }

  bool same_shape(const ImageGrid& other) const {
    return width_ == other.width_ && height_ == other.height_;
  }
  bool all_finite() const;
  bool non_negative() const;

  double sum() const;
  double mean() const;
  double max() const;
  double min() const;

  friend bool operator==(const ImageGrid&, const ImageGrid&) = default;

 private:
  std::size_t width_;
  std::size_t height_;
  double pixel_pitch_;
  std::vector<double> samples_;
};

/// Complex 2D DFT, zero frequency at (0,0).
class Spectrum {
 public:
  Spectrum(std::size_t width, std::size_t height, std::complex<double> fill = {});
  Spectrum(std::size_t width, std::size_t height, std::vector<std::complex<double>> samples);

  std::size_t width() const { return width_; }
  std::size_t height() const { return height_; }
  std::size_t size() const { return samples_.size(); }

  std::complex<double> operator()(std::size_t x, std::size_t y) const { return samples_[y * width_ + x]; }
  std::complex<double>& operator()(std::size_t x, std::size_t y) { return samples_[y * width_ + x]; }
  std::complex<double> operator[](std::size_t i) const { return samples_[i]; }
  std::complex<double>& operator[](std::size_t i) { return samples_[i]; }

  std::span<const std::complex<double>> samples() const { return samples_; }
  std::span<std::complex<double>> samples() { return samples_; }

  bool all_finite() const;

 private:
  std::size_t width_;
  std::size_t height_;
  std::vector<std::complex<double>> samples_;
};

/// Unnormalized forward 2D DFT. Works for any size.
Spectrum fft_forward(const ImageGrid& img);

/// Same transform on a complex field; used for products in the Fourier domain.
Spectrum fft_forward(const Spectrum& field);

/// Normalized inverse 2D DFT; the imaginary part is discarded. `pixel_pitch_um`
/// is carried onto the returned grid.
ImageGrid fft_inverse(const Spectrum& spec, double pixel_pitch_um = 1.0);

/// Normalized inverse 2D DFT keeping the complex result.
Spectrum fft_inverse_complex(const Spectrum& spec);

/// Signed DFT frequency index of bin `k` in a transform of length `n`,
/// in (-n/2, n/2].
inline long frequency_index(std::size_t k, std::size_t n) {
  return k <= n / 2 ? static_cast<long>(k) : static_cast<long>(k) - static_cast<long>(n);
}

/// Reads the width x height window whose top-left corner sits at `offset`
/// inside `master`.
ImageGrid window_crop(const ImageGrid& master, ShiftVector offset, std::size_t width, std::size_t height);

/// Returns `master` with `delta` added inside the window at `offset`.
ImageGrid window_accumulate(const ImageGrid& master, ShiftVector offset, const ImageGrid& delta);

/// Places translated frame-sized windows on a padded master canvas.
///
/// A window for shift s starts at `anchor - s`, so content on the canvas
/// appears to move by +s inside the window. Every window offset lies in
/// [0, canvas - frame] per axis.
struct CanvasGeometry {
  std::size_t frame_width = 0;
  std::size_t frame_height = 0;
  std::size_t canvas_width = 0;
  std::size_t canvas_height = 0;
  ShiftVector anchor;

  /// Tightest canvas holding every window: frame + (max - min) per axis.
  static CanvasGeometry fit(std::size_t frame_width, std::size_t frame_height,
                            std::span<const ShiftVector> shifts);

  /// Canvas padded symmetrically around the frame; shift (0,0) is centered.
  static CanvasGeometry centered(std::size_t frame_width, std::size_t frame_height,
                                 std::size_t canvas_width, std::size_t canvas_height);

  ShiftVector window_offset(ShiftVector shift) const { return anchor - shift; }
  bool contains(ShiftVector shift) const;
};

}  // namespace ifp
