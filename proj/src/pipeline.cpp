#include "ifp/pipeline.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <string>

#include "ifp/error.hpp"
#include "ifp/io.hpp"
#include "ifp/metrics.hpp"
#include "ifp/optics.hpp"
#include "ifp/phantom.hpp"
#include "ifp/recon.hpp"
#include "ifp/tpe.hpp"

namespace ifp {

namespace fs = std::filesystem;

namespace {

fs::path out_dir(const PipelineConfig& cfg) { return cfg.paths.out_dir; }

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw FormatError("cannot create directory " + dir.string() + ": " + ec.message());
}

std::string frame_name(std::size_t index, std::size_t count) {
  const int digits = std::max(3, static_cast<int>(std::to_string(count > 0 ? count - 1 : 0).size()));
  char buf[32];
  std::snprintf(buf, sizeof(buf), "frame_%0*zu.ifpm", digits, index);
  return buf;
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_image_pair(const ImageGrid& img, const fs::path& dir, const std::string& stem) {
  encode_matrix(img, dir / (stem + ".ifpm"));
  write_pgm(img, dir / (stem + ".pgm"));
}

}  // namespace

fs::path frames_dir(const PipelineConfig& cfg) {
  return cfg.paths.frames_dir.empty() ? out_dir(cfg) / "frames" : fs::path(cfg.paths.frames_dir);
}

fs::path positions_path(const PipelineConfig& cfg) {
  return cfg.paths.positions.empty() ? out_dir(cfg) / "positions.csv" : fs::path(cfg.paths.positions);
}

ImageGrid load_object(const PipelineConfig& cfg) {
  if (!cfg.paths.object.empty()) return decode_matrix(cfg.paths.object, cfg.optical.pixel_pitch_um);
  return resolution_chart(cfg.object.width, cfg.object.height, cfg.optical.pixel_pitch_um, cfg.object.background);
}

std::vector<ImageGrid> load_frames(const fs::path& dir, double pixel_pitch_um) {
  if (!fs::is_directory(dir)) throw FormatError("frames directory " + dir.string() + " does not exist");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (entry.is_regular_file() && name.starts_with("frame_") && name.ends_with(".ifpm")) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw FormatError("no frame_*.ifpm files in " + dir.string());

  std::vector<ImageGrid> frames;
  frames.reserve(files.size());
  for (const auto& f : files) {
    frames.push_back(decode_matrix(f, pixel_pitch_um));
    if (!frames.back().same_shape(frames.front())) throw FormatError(f.string() + ": frame size differs from the first frame");
    if (!frames.back().non_negative()) throw FormatError(f.string() + ": frame has negative intensities");
  }
  return frames;
}

void run_simulate(const PipelineConfig& cfg) {
  const fs::path dir = out_dir(cfg);
  const fs::path fdir = frames_dir(cfg);
  ensure_dir(dir);
  ensure_dir(fdir);

  const ImageGrid object = load_object(cfg);
  const auto shifts = generate_scan_grid(cfg.scan.n_per_side, cfg.scan.step);
  const SimulatedScan scan = simulate_scan(object, cfg.optical, shifts, cfg.speckle.correlation_length,
                                           cfg.noise_variance_ratio, scenario_speckle_seed(cfg.speckle.seed, 0),
                                           scenario_noise_seed(cfg.speckle.seed, cfg.noise_variance_ratio, 0));

  write_image_pair(object, dir, "object_truth");
  write_image_pair(scan.master_speckle, dir, "speckle_truth");
  write_image_pair(incoherent_image(object, scan.model), dir, "diffraction_limited");
  write_positions_csv(shifts, dir / "truth_positions.csv");

  const auto& frames = scan.acquisition.frames;
  for (std::size_t n = 0; n < frames.size(); ++n) {
    encode_matrix(frames[n], fdir / frame_name(n, frames.size()));
  }
  // Four evenly spaced raw frames as viewable previews.
  for (std::size_t k = 0; k < 4; ++k) {
    write_pgm(frames[k * frames.size() / 4], dir / ("raw_preview_" + std::to_string(k) + ".pgm"));
  }
}

void run_extract(const PipelineConfig& cfg) {
  const auto frames = load_frames(frames_dir(cfg), cfg.optical.pixel_pitch_um);
  const ExtractionResult result = extract_positions(frames, cfg.extract_options());
  const fs::path path = positions_path(cfg);
  if (path.has_parent_path()) ensure_dir(path.parent_path());
  write_positions_csv(result, path);
}

void run_reconstruct(const PipelineConfig& cfg) {
  const auto frames = load_frames(frames_dir(cfg), cfg.optical.pixel_pitch_um);
  const PositionTable positions = read_positions_csv(positions_path(cfg));
  if (positions.shifts.size() != frames.size()) {
    throw FormatError("positions file lists " + std::to_string(positions.shifts.size()) + " frames but " +
                      std::to_string(frames.size()) + " frames were loaded");
  }

  const OpticalModel model = build_otf(cfg.optical, frames.front().width(), frames.front().height());
  const ReconState state = run_ifp(frames, positions.shifts, model, cfg.recon);

  const fs::path dir = out_dir(cfg);
  ensure_dir(dir);
  write_image_pair(state.object, dir, "object_recon");
  write_image_pair(state.pattern_master, dir, "pattern_recon");
  encode_matrix(state.visited, dir / "pattern_visited.ifpm");

  std::string residuals = "iteration,residual\n";
  for (std::size_t k = 0; k < state.residual_history.size(); ++k) {
    residuals += std::to_string(k + 1) + "," + format_number(state.residual_history[k]) + "\n";
  }
  write_file_atomic(dir / "residuals.csv", residuals);

  const auto unconstrained = static_cast<std::size_t>(
      std::count(state.visited.samples().begin(), state.visited.samples().end(), 0.0));
  nlohmann::ordered_json info;
  info["iterations"] = state.iteration;
  info["converged"] = state.converged;
  info["canvas_width"] = state.geometry.canvas_width;
  info["canvas_height"] = state.geometry.canvas_height;
  info["canvas_anchor"] = {state.geometry.anchor.dx, state.geometry.anchor.dy};
  info["unconstrained_pattern_pixels"] = unconstrained;
  info["clamp_nonnegative"] = cfg.recon.clamp_nonnegative;
  write_file_atomic(dir / "recon_info.json", info.dump(2) + "\n");
}

void run_pipeline(const PipelineConfig& cfg) {
  run_simulate(cfg);
  run_extract(cfg);
  run_reconstruct(cfg);
}

void run_sweep_noise(const PipelineConfig& cfg) {
  const SimulationScenario scenario{load_object(cfg),
                                    cfg.optical,
                                    cfg.scan.n_per_side,
                                    cfg.scan.step,
                                    cfg.speckle.correlation_length,
                                    cfg.speckle.seed,
                                    cfg.extract_options()};
  const auto rows = noise_sweep(scenario, cfg.sweep.levels, cfg.sweep.trials);

  std::string csv = "level,mean_abs_x,mean_abs_y\n";
  for (const auto& r : rows) {
    csv += format_number(r.level) + "," + format_number(r.mean_abs_x) + "," + format_number(r.mean_abs_y) + "\n";
  }
  ensure_dir(out_dir(cfg));
  write_file_atomic(out_dir(cfg) / "noise_sweep.csv", csv);
}

void run_evaluate(const PipelineConfig& cfg) {
  const fs::path dir = out_dir(cfg);
  const double pitch = cfg.optical.pixel_pitch_um;
  const ImageGrid truth = decode_matrix(dir / "object_truth.ifpm", pitch);
  const OpticalModel model = build_otf(cfg.optical, truth.width(), truth.height());

  std::string csv = "image,rmse,psnr_db,beyond_cutoff_energy_ratio\n";
  for (const char* stem : {"diffraction_limited", "object_recon"}) {
    const fs::path path = dir / (std::string(stem) + ".ifpm");
    if (!fs::exists(path)) continue;
    const QualityReport q = image_quality(decode_matrix(path, pitch), truth, model);
    csv += std::string(stem) + "," + format_number(q.rmse) + "," + format_number(q.psnr) + "," +
           format_number(q.beyond_cutoff_energy_ratio) + "\n";
  }
  write_file_atomic(dir / "quality.csv", csv);
}

ExitCode exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return kExitConfig;
  if (dynamic_cast<const DegenerateInput*>(&e)) return kExitDegenerate;
  if (dynamic_cast<const Error*>(&e)) return kExitData;
  return kExitFailure;
}

}  // namespace ifp
