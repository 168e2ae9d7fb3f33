#pragma once

#include <exception>
#include <filesystem>
#include <vector>

#include "ifp/config.hpp"
#include "ifp/grid.hpp"

namespace ifp {

// Subcommand bodies. Every output lands under the configured directories;
// identical configs produce byte-identical files.
//
// simulate     -> object_truth, speckle_truth, diffraction_limited (.ifpm/.pgm),
//                 truth_positions.csv, frames/frame_NNN.ifpm
// extract      -> positions.csv
// reconstruct  -> object_recon, pattern_recon (.ifpm/.pgm), pattern_visited.ifpm,
//                 residuals.csv, recon_info.json
// sweep-noise  -> noise_sweep.csv
// evaluate     -> quality.csv
void run_simulate(const PipelineConfig& cfg);
void run_extract(const PipelineConfig& cfg);
void run_reconstruct(const PipelineConfig& cfg);
void run_pipeline(const PipelineConfig& cfg);
void run_sweep_noise(const PipelineConfig& cfg);
void run_evaluate(const PipelineConfig& cfg);

std::filesystem::path frames_dir(const PipelineConfig& cfg);
std::filesystem::path positions_path(const PipelineConfig& cfg);

/// Test object: the file named in the config, or the procedural chart.
ImageGrid load_object(const PipelineConfig& cfg);

/// Frames `frame_*.ifpm` in `dir`, in name order.
std::vector<ImageGrid> load_frames(const std::filesystem::path& dir, double pixel_pitch_um);

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitConfig = 2,
  kExitData = 3,
  kExitDegenerate = 4,
};

ExitCode exit_code_for(const std::exception& e);

}  // namespace ifp
