#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "ifp/grid.hpp"
#include "ifp/optics.hpp"
#include "ifp/tpe.hpp"

namespace ifp {

struct ShiftError {
  double dx = 0.0;
  double dy = 0.0;
};

struct PositionErrorReport {
  std::vector<ShiftError> per_frame_error;  // estimated - truth after alignment
  double mean_abs_x = 0.0;
  double mean_abs_y = 0.0;
  double max_abs = 0.0;  // largest |component| over all frames
};

/// Aligns `estimated` onto `truth` with the constant offset that maps the
/// reference frame's estimate onto its true position, then reports the
/// per-frame residuals.
PositionErrorReport position_errors(const std::vector<ShiftVector>& estimated, const std::vector<ShiftVector>& truth,
                                    std::size_t reference_index = 0);

struct QualityReport {
  double rmse = 0.0;
  double psnr = 0.0;  // dB; +infinity when rmse == 0
  double beyond_cutoff_energy_ratio = 0.0;
};

/// Scales `img` to unit mean. Throws DegenerateInput on a zero-mean image.
ImageGrid normalize_mean(const ImageGrid& img);

/// Share of spectral energy of `img` at frequencies the OTF does not pass.
double beyond_cutoff_energy_ratio(const ImageGrid& img, const OpticalModel& model);

/// RMSE/PSNR between unit-mean versions of `recon` and `truth`; PSNR uses the
/// normalized truth's peak. Rejects a constant `truth`.
QualityReport image_quality(const ImageGrid& recon, const ImageGrid& truth, const OpticalModel& model);

/// Canvas offset that maps a pixel of the reconstruction canvas onto the
/// truth canvas, pinned by one frame whose shift is known in both frames of
/// reference.
ShiftVector canvas_alignment(const CanvasGeometry& recon, ShiftVector recon_shift, const CanvasGeometry& truth,
                             ShiftVector truth_shift);

/// Pearson correlation between the recovered pattern and the truth speckle
/// over visited canvas pixels that land inside the truth canvas.
double pattern_correlation(const ImageGrid& recovered, const ImageGrid& visited, const ImageGrid& truth_master,
                           ShiftVector alignment);

/// Everything needed to simulate one scan and extract its positions.
struct SimulationScenario {
  ImageGrid object;
  OpticalConfig optics;
  int n_per_side = 9;
  int step = 10;
  double correlation_length = 1.0;
  std::uint64_t seed = 1;
  ExtractOptions extract;
};

struct NoiseSweepRow {
  double level = 0.0;
  double mean_abs_x = 0.0;
  double mean_abs_y = 0.0;
};

/// Position error curve over noise levels, averaged over `trials` seeded
/// trials. Trial t uses the same speckle at every level; noise seeds derive
/// from (seed, level value, t), so rows do not depend on level order.
std::vector<NoiseSweepRow> noise_sweep(const SimulationScenario& scenario, const std::vector<double>& levels,
                                       int trials);

/// Seed of the speckle canvas for trial `trial` of a scenario.
std::uint64_t scenario_speckle_seed(std::uint64_t seed, int trial);

/// Seed of the frame noise for (level, trial); keyed on the level's value.
std::uint64_t scenario_noise_seed(std::uint64_t seed, double level, int trial);

/// Runs simulate -> extract -> position_errors for one (level, trial).
PositionErrorReport scenario_position_errors(const SimulationScenario& scenario, double level, int trial);

}  // namespace ifp
