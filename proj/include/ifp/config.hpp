#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "ifp/optics.hpp"
#include "ifp/recon.hpp"
#include "ifp/tpe.hpp"

namespace ifp {

struct ObjectConfig {
  std::size_t width = 256;
  std::size_t height = 256;
  double background = 0.2;
};

struct ScanConfig {
  int n_per_side = 9;
  int step = 10;
};

struct SpeckleConfig {
  std::uint64_t seed = 1;
  double correlation_length = 1.0;  // Gaussian sigma, pixels
};

struct TpeConfig {
  std::size_t reference_index = 0;
  double floor = 1e-3;
  CorrelationMode mode = CorrelationMode::circular;
};

struct SweepConfig {
  std::vector<double> levels{0.005, 0.01, 0.05, 0.1, 0.2};
  int trials = 3;
};

struct PathsConfig {
  std::string out_dir = "out";
  std::string frames_dir;  // empty: <out_dir>/frames
  std::string positions;   // empty: <out_dir>/positions.csv
  std::string object;      // empty: generate the resolution chart
};

/// Everything a CLI run needs. Defaults reproduce the reference simulation:
/// D = 10 mm, f = 300 mm, 632 nm, 3.45 um pixels, 9 x 9 scan at 10 px,
/// noise variance 0.1 % of the signal variance.
struct PipelineConfig {
  OpticalConfig optical;
  ObjectConfig object;
  ScanConfig scan;
  SpeckleConfig speckle;
  double noise_variance_ratio = 0.001;
  TpeConfig tpe;
  ReconOptions recon;
  SweepConfig sweep;
  PathsConfig paths;

  /// Throws ConfigError on any violated invariant.
  void validate() const;

  ExtractOptions extract_options() const { return {tpe.reference_index, tpe.floor, tpe.mode}; }
};

/// Parses JSON text. Missing fields keep their defaults; unknown keys, type
/// errors and invariant violations raise ConfigError naming the line.
PipelineConfig parse_config(std::string_view text, const std::string& source = "<config>");

PipelineConfig load_config(const std::filesystem::path& path);

}  // namespace ifp
