#include "ifp/metrics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <string>

#include "ifp/error.hpp"
#include "ifp/rng.hpp"

namespace ifp {

PositionErrorReport position_errors(const std::vector<ShiftVector>& estimated, const std::vector<ShiftVector>& truth,
                                    std::size_t reference_index) {
  if (estimated.size() != truth.size()) {
    throw InvalidArgument("position_errors: " + std::to_string(estimated.size()) + " estimates but " +
                          std::to_string(truth.size()) + " true positions");
  }
  if (estimated.empty()) throw InvalidArgument("position_errors: no positions");
  if (reference_index >= estimated.size()) throw InvalidArgument("position_errors: reference index out of range");

  const ShiftVector offset = truth[reference_index] - estimated[reference_index];
  PositionErrorReport report;
  report.per_frame_error.reserve(estimated.size());
  for (std::size_t n = 0; n < estimated.size(); ++n) {
    const ShiftVector e = estimated[n] + offset - truth[n];
    const ShiftError err{static_cast<double>(e.dx), static_cast<double>(e.dy)};
    report.per_frame_error.push_back(err);
    report.mean_abs_x += std::abs(err.dx);
    report.mean_abs_y += std::abs(err.dy);
    report.max_abs = std::max({report.max_abs, std::abs(err.dx), std::abs(err.dy)});
  }
  report.mean_abs_x /= static_cast<double>(estimated.size());
  report.mean_abs_y /= static_cast<double>(estimated.size());
  return report;
}

ImageGrid normalize_mean(const ImageGrid& img) {
  const double mean = img.mean();
  if (mean == 0.0 || !std::isfinite(mean)) throw DegenerateInput("cannot normalize an image with zero mean");
  ImageGrid out = img;
  for (auto& v : out.samples()) v /= mean;
  return out;
}

double beyond_cutoff_energy_ratio(const ImageGrid& img, const OpticalModel& model) {
  if (!img.same_shape(model.otf)) throw InvalidArgument("beyond_cutoff_energy_ratio: image does not match the OTF");
  const Spectrum spec = fft_forward(img);
  double total = 0.0;
  double outside = 0.0;
  for (std::size_t i = 0; i < spec.size(); ++i) {
    const double e = std::norm(spec[i]);
    total += e;
    if (model.otf[i] == 0.0) outside += e;
  }
  return total > 0.0 ? outside / total : 0.0;
}

QualityReport image_quality(const ImageGrid& recon, const ImageGrid& truth, const OpticalModel& model) {
  if (!recon.same_shape(truth)) throw InvalidArgument("image_quality: images differ in size");
  if (truth.max() == truth.min()) throw DegenerateInput("image_quality: truth image has zero variance");

  const ImageGrid r = normalize_mean(recon);
  const ImageGrid t = normalize_mean(truth);
  double sq = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) sq += (r[i] - t[i]) * (r[i] - t[i]);

  QualityReport q;
  q.rmse = std::sqrt(sq / static_cast<double>(r.size()));
  q.psnr = q.rmse > 0.0 ? 20.0 * std::log10(t.max() / q.rmse) : std::numeric_limits<double>::infinity();
  q.beyond_cutoff_energy_ratio = beyond_cutoff_energy_ratio(recon, model);
  return q;
}

ShiftVector canvas_alignment(const CanvasGeometry& recon, ShiftVector recon_shift, const CanvasGeometry& truth,
                             ShiftVector truth_shift) {
  return truth.window_offset(truth_shift) - recon.window_offset(recon_shift);
}

double pattern_correlation(const ImageGrid& recovered, const ImageGrid& visited, const ImageGrid& truth_master,
                           ShiftVector alignment) {
  if (!recovered.same_shape(visited)) throw InvalidArgument("pattern_correlation: mask does not match the pattern");

  double n = 0.0;
  double sa = 0.0;
  double sb = 0.0;
  double saa = 0.0;
  double sbb = 0.0;
  double sab = 0.0;
  for (std::size_t y = 0; y < recovered.height(); ++y) {
    const long ty = static_cast<long>(y) + alignment.dy;
    if (ty < 0 || ty >= static_cast<long>(truth_master.height())) continue;
    for (std::size_t x = 0; x < recovered.width(); ++x) {
      const long tx = static_cast<long>(x) + alignment.dx;
      if (tx < 0 || tx >= static_cast<long>(truth_master.width()) || visited(x, y) == 0.0) continue;
      const double a = recovered(x, y);
      const double b = truth_master(static_cast<std::size_t>(tx), static_cast<std::size_t>(ty));
      n += 1.0;
      sa += a;
      sb += b;
      saa += a * a;
      sbb += b * b;
      sab += a * b;
    }
  }
  if (n < 2.0) throw DegenerateInput("pattern_correlation: no overlapping visited pixels");
  const double cov = sab - sa * sb / n;
  const double va = saa - sa * sa / n;
  const double vb = sbb - sb * sb / n;
  if (!(va > 0.0) || !(vb > 0.0)) throw DegenerateInput("pattern_correlation: constant pattern");
  return cov / std::sqrt(va * vb);
}

std::uint64_t scenario_speckle_seed(std::uint64_t seed, int trial) {
  return derive_seed(seed, {0x737065636b6c65ULL, static_cast<std::uint64_t>(trial)});
}

std::uint64_t scenario_noise_seed(std::uint64_t seed, double level, int trial) {
  return derive_seed(seed, {0x6e6f697365ULL, std::bit_cast<std::uint64_t>(level), static_cast<std::uint64_t>(trial)});
}

PositionErrorReport scenario_position_errors(const SimulationScenario& scenario, double level, int trial) {
  const auto shifts = generate_scan_grid(scenario.n_per_side, scenario.step);
  const SimulatedScan scan =
      simulate_scan(scenario.object, scenario.optics, shifts, scenario.correlation_length, level,
                    scenario_speckle_seed(scenario.seed, trial), scenario_noise_seed(scenario.seed, level, trial));
  const ExtractionResult extracted = extract_positions(scan.acquisition.frames, scenario.extract);
  return position_errors(extracted.shifts, shifts, extracted.reference_index);
}

std::vector<NoiseSweepRow> noise_sweep(const SimulationScenario& scenario, const std::vector<double>& levels,
                                       int trials) {
  if (levels.empty()) throw InvalidArgument("noise_sweep: no noise levels");
  if (trials < 1) throw InvalidArgument("noise_sweep: trials must be at least 1");
  for (double level : levels) {
    if (!(level >= 0.0)) throw InvalidArgument("noise_sweep: noise levels must be >= 0");
  }

  std::vector<NoiseSweepRow> rows;
  rows.reserve(levels.size());
  for (double level : levels) {
    NoiseSweepRow row{level, 0.0, 0.0};
    try {
      for (int t = 0; t < trials; ++t) {
        const PositionErrorReport r = scenario_position_errors(scenario, level, t);
        row.mean_abs_x += r.mean_abs_x;
        row.mean_abs_y += r.mean_abs_y;
      }
    } catch (const Error&) {
      rethrow_with_context("noise level " + std::to_string(level));
    }
    row.mean_abs_x /= trials;
    row.mean_abs_y /= trials;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace ifp
