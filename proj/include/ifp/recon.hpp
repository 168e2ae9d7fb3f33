#pragma once

#include <cstdint>
#include <vector>

#include "ifp/grid.hpp"
#include "ifp/optics.hpp"

namespace ifp {

enum class FrameOrder { sequential, seeded_random };

struct ReconOptions {
  int max_iterations = 50;
  double convergence_tolerance = 1e-4;  // relative L2 change of the object
  FrameOrder frame_order = FrameOrder::sequential;
  std::uint64_t order_seed = 0;  // used with FrameOrder::seeded_random
  bool clamp_nonnegative = true;

  void validate() const;
};

/// Object and master pattern estimates plus iteration bookkeeping.
struct ReconState {
  ImageGrid object;
  ImageGrid pattern_master;
  CanvasGeometry geometry;
  std::vector<ShiftVector> shifts;
  /// 1 where some frame window covers the canvas pixel, 0 where the pattern is
  /// unconstrained and keeps its initial value.
  ImageGrid visited;
  int iteration = 0;
  std::vector<double> residual_history;  // sum |I_m^update - I_m|^2 per iteration
  bool converged = false;
};

/// Object = mean of the frames, pattern = ones on the tightest canvas.
ReconState init_state(const std::vector<ImageGrid>& frames, const std::vector<ShiftVector>& shifts);

/// I_m = object * pattern window for `shift`.
ImageGrid target_image(const ReconState& state, ShiftVector shift);

/// I_m^update = F^-1( F(I_m) + OTF [F(I_n) - OTF F(I_m)] ).
ImageGrid fourier_update(const ImageGrid& target, const ImageGrid& captured, const OpticalModel& model);

/// Same update with the captured spectrum precomputed.
ImageGrid fourier_update(const ImageGrid& target, const Spectrum& captured_spectrum, const OpticalModel& model);

/// object + window / max(window)^2 * (updated_target - target).
ImageGrid object_update(const ImageGrid& object, const ImageGrid& pattern_window, const ImageGrid& target,
                        const ImageGrid& updated_target, bool clamp_nonnegative = true);

/// window + updated_object / max(updated_object)^2 * (updated_target - target).
ImageGrid pattern_update(const ImageGrid& pattern_window, const ImageGrid& updated_object, const ImageGrid& target,
                         const ImageGrid& updated_target, bool clamp_nonnegative = true);

/// One pass over every frame in the order set by `opts`. Returns the summed
/// squared residual of the pass.
double ifp_iteration(ReconState& state, const std::vector<ImageGrid>& frames,
                     const std::vector<Spectrum>& frame_spectra, const OpticalModel& model, const ReconOptions& opts);

/// Iterates from `state` until max_iterations or the object's relative change
/// drops below the tolerance.
ReconState run_ifp(ReconState state, const std::vector<ImageGrid>& frames, const OpticalModel& model,
                   const ReconOptions& opts);

ReconState run_ifp(const std::vector<ImageGrid>& frames, const std::vector<ShiftVector>& shifts,
                   const OpticalModel& model, const ReconOptions& opts);

}  // namespace ifp
