#pragma once

#include <cstddef>
#include <vector>

#include "ifp/grid.hpp"

namespace ifp {

/// Zero-mean cross-correlation over all integer lags.
struct CorrelationSurface {
  ImageGrid values;  // DFT layout: lag (0,0) at index (0,0)
  ShiftVector peak;  // centered lag of the maximum
  double peak_value = 0.0;
  double secondary_peak_value = 0.0;  // largest local maximum other than the peak
};

enum class CorrelationMode {
  circular,
  padded,  // zero-pad to twice the size; no wraparound
};

/// Per-frame translations recovered from raw frames.
struct ExtractionResult {
  std::vector<ShiftVector> shifts;  // relative to the reference frame
  std::size_t reference_index = 0;
  std::vector<double> confidence;  // peak / secondary peak, >= 1
};

struct ExtractOptions {
  std::size_t reference_index = 0;
  double floor = 1e-3;
  CorrelationMode mode = CorrelationMode::circular;
};

/// Pixel-wise arithmetic mean of equally sized frames.
ImageGrid mean_image(const std::vector<ImageGrid>& frames);

/// frame / max(mean, floor * max(mean)).
ImageGrid isolate_speckle(const ImageGrid& frame, const ImageGrid& mean, double floor);

/// Cross-correlation C(l) = sum_x a'(x) b'(x + l) of the zero-mean inputs
/// a' and b'. If b is a translated by s, the peak sits at lag s. Ties go to
/// the smallest (dy, dx).
CorrelationSurface cross_correlate(const ImageGrid& a, const ImageGrid& b,
                                   CorrelationMode mode = CorrelationMode::circular);

/// mean_image -> isolate_speckle -> cross_correlate(reference, frame) for each
/// frame. The reference frame maps to (0,0).
ExtractionResult extract_positions(const std::vector<ImageGrid>& frames, const ExtractOptions& options);

inline ExtractionResult extract_positions(const std::vector<ImageGrid>& frames, std::size_t reference_index = 0,
                                          double floor = 1e-3) {
  return extract_positions(frames, ExtractOptions{reference_index, floor, CorrelationMode::circular});
}

}  // namespace ifp
