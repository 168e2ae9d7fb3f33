// Command-line driver: simulate, extract, reconstruct, pipeline, sweep-noise,
// evaluate.

#include <CLI11.hpp>

#include <cstdio>
#include <functional>
#include <iostream>
#include <optional>
#include <string>

#include "ifp/config.hpp"
#include "ifp/error.hpp"
#include "ifp/pipeline.hpp"

namespace {

struct Overrides {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  std::string frames_dir;
  std::string positions;
  std::optional<std::size_t> reference_index;
  bool no_clamp = false;
};

ifp::PipelineConfig resolve(const Overrides& o) {
  ifp::PipelineConfig cfg = o.config.empty() ? ifp::PipelineConfig{} : ifp::load_config(o.config);
  if (o.seed) cfg.speckle.seed = *o.seed;
  if (!o.out_dir.empty()) cfg.paths.out_dir = o.out_dir;
  if (!o.frames_dir.empty()) cfg.paths.frames_dir = o.frames_dir;
  if (!o.positions.empty()) cfg.paths.positions = o.positions;
  if (o.reference_index) cfg.tpe.reference_index = *o.reference_index;
  if (o.no_clamp) cfg.recon.clamp_nonnegative = false;
  cfg.validate();

  if (!cfg.optical.nyquist_sampled()) {
    std::fprintf(stderr,
                 "warning: detector sampling %.2f cycles/mm is below twice the incoherent cutoff %.2f cycles/mm\n",
                 cfg.optical.sampling_frequency(), cfg.optical.cutoff_frequency());
  }
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Incoherent Fourier ptychography with translation position extraction"};
  app.require_subcommand(1);

  Overrides o;
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", o.config, "JSON configuration file");
    cmd->add_option("--seed", o.seed, "Override the speckle/noise seed");
    cmd->add_option("--out-dir", o.out_dir, "Output directory");
    cmd->add_option("--frames-dir", o.frames_dir, "Directory of frame_*.ifpm files");
    cmd->add_option("--positions", o.positions, "Positions CSV (extract output, reconstruct input)");
    cmd->add_option("--reference-index", o.reference_index, "Reference frame for position extraction");
    cmd->add_flag("--no-clamp", o.no_clamp, "Disable non-negativity clamping during reconstruction");
  };

  std::function<void(const ifp::PipelineConfig&)> action;
  auto add_command = [&](const char* name, const char* help, void (*fn)(const ifp::PipelineConfig&)) {
    CLI::App* cmd = app.add_subcommand(name, help);
    add_common(cmd);
    cmd->callback([&action, fn] { action = fn; });
  };
  add_command("simulate", "Simulate speckle-modulated frames and ground truth", ifp::run_simulate);
  add_command("extract", "Recover speckle translations from raw frames", ifp::run_extract);
  add_command("reconstruct", "Recover object and pattern from frames and positions", ifp::run_reconstruct);
  add_command("pipeline", "simulate, extract and reconstruct in one run", ifp::run_pipeline);
  add_command("sweep-noise", "Position error versus noise level", ifp::run_sweep_noise);
  add_command("evaluate", "Compare reconstruction and diffraction-limited image with the truth", ifp::run_evaluate);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return ifp::kExitConfig;
  }

  try {
    action(resolve(o));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return ifp::exit_code_for(e);
  }
  return ifp::kExitOk;
}
