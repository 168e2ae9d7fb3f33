#include "ifp/config.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

#include "ifp/error.hpp"
#include "ifp/io.hpp"

namespace ifp {

namespace {

using nlohmann::json;

std::size_t line_at(std::string_view text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

// Line of `"key"` inside `"section"` (or at top level when section is empty).
// Best effort: the DOM keeps no positions.
std::size_t line_of_key(std::string_view text, std::string_view section, std::string_view key) {
  std::size_t from = 0;
  if (!section.empty()) {
    const auto s = text.find("\"" + std::string(section) + "\"");
    if (s != std::string_view::npos) from = s;
  }
  const auto k = key.empty() ? std::string_view::npos : text.find("\"" + std::string(key) + "\"", from);
  return line_at(text, k != std::string_view::npos ? k : from);
}

class SectionReader {
 public:
  SectionReader(const json& node, std::string section, std::string_view text, const std::string& source)
      : node_(node), section_(std::move(section)), text_(text), source_(source) {
    if (!node_.is_object()) fail("", "section must be a JSON object");
  }

  template <typename T>
  void read(const char* key, T& out) {
    known_.emplace_back(key);
    const auto it = node_.find(key);
    if (it == node_.end()) return;
    try {
      if constexpr (std::is_integral_v<T> && !std::is_same_v<T, bool>) {
        if (!it->is_number_integer()) fail(key, "expected an integer");
        if constexpr (std::is_unsigned_v<T>) {
          if (it->is_number_integer() && !it->is_number_unsigned()) fail(key, "expected a non-negative integer");
        }
      }
      out = it->template get<T>();
    } catch (const json::exception& e) {
      fail(key, e.what());
    }
  }

  void read_enum(const char* key, const std::map<std::string, std::function<void()>>& choices) {
    known_.emplace_back(key);
    const auto it = node_.find(key);
    if (it == node_.end()) return;
    if (!it->is_string()) fail(key, "expected a string");
    const auto choice = choices.find(it->get<std::string>());
    if (choice == choices.end()) fail(key, "unrecognized value '" + it->get<std::string>() + "'");
    choice->second();
  }

  const json* child(const char* key) {
    known_.emplace_back(key);
    const auto it = node_.find(key);
    return it == node_.end() ? nullptr : &*it;
  }

  void reject_unknown() const {
    for (const auto& [key, value] : node_.items()) {
      if (std::find(known_.begin(), known_.end(), key) == known_.end()) fail(key, "unknown key '" + key + "'");
    }
  }

  [[noreturn]] void fail(const std::string& key, const std::string& message) const {
    const std::string where = section_.empty() ? key : (key.empty() ? section_ : section_ + "." + key);
    throw ConfigError(source_ + ":" + std::to_string(line_of_key(text_, section_, key)) + ": " +
                      (where.empty() ? "" : where + ": ") + message);
  }

 private:
  const json& node_;
  std::string section_;
  std::string_view text_;
  const std::string& source_;
  std::vector<std::string> known_;
};

void check(bool ok, std::string_view text, const std::string& source, const char* section, const char* key,
           const std::string& message) {
  if (!ok) {
    throw ConfigError(source + ":" + std::to_string(line_of_key(text, section, key)) + ": " + section + "." + key +
                      ": " + message);
  }
}

}  // namespace

void PipelineConfig::validate() const {
  try {
    optical.validate();
    recon.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  if (object.width < 2 || object.height < 2) throw ConfigError("object must be at least 2x2 pixels");
  if (!(object.background >= 0.0 && object.background <= 1.0)) throw ConfigError("object background must lie in [0, 1]");
  if (scan.n_per_side < 1) throw ConfigError("scan n_per_side must be at least 1");
  if (scan.step < 1) throw ConfigError("scan step must be at least 1 pixel");
  if (!(speckle.correlation_length >= 0.0)) throw ConfigError("speckle correlation length must be >= 0");
  if (!(noise_variance_ratio >= 0.0)) throw ConfigError("noise variance ratio must be >= 0");
  if (!(tpe.floor > 0.0)) throw ConfigError("tpe floor must be positive");
  if (sweep.levels.empty()) throw ConfigError("sweep needs at least one level");
  for (double l : sweep.levels) {
    if (!(l >= 0.0)) throw ConfigError("sweep levels must be >= 0");
  }
  if (sweep.trials < 1) throw ConfigError("sweep trials must be at least 1");
}

PipelineConfig parse_config(std::string_view text, const std::string& source) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError(source + ":" + std::to_string(line_at(text, e.byte == 0 ? 0 : e.byte - 1)) + ": " + e.what());
  }

  PipelineConfig cfg;
  SectionReader top(root, "", text, source);

  if (const json* n = top.child("optical")) {
    SectionReader r(*n, "optical", text, source);
    r.read("aperture_diameter_mm", cfg.optical.aperture_diameter_mm);
    r.read("focal_length_mm", cfg.optical.focal_length_mm);
    r.read("wavelength_nm", cfg.optical.wavelength_nm);
    r.read("pixel_pitch_um", cfg.optical.pixel_pitch_um);
    r.reject_unknown();
    check(cfg.optical.aperture_diameter_mm > 0, text, source, "optical", "aperture_diameter_mm", "must be positive");
    check(cfg.optical.focal_length_mm > 0, text, source, "optical", "focal_length_mm", "must be positive");
    check(cfg.optical.wavelength_nm > 0, text, source, "optical", "wavelength_nm", "must be positive");
    check(cfg.optical.pixel_pitch_um > 0, text, source, "optical", "pixel_pitch_um", "must be positive");
  }
  if (const json* n = top.child("object")) {
    SectionReader r(*n, "object", text, source);
    r.read("width", cfg.object.width);
    r.read("height", cfg.object.height);
    r.read("background", cfg.object.background);
    r.reject_unknown();
    check(cfg.object.width >= 2, text, source, "object", "width", "must be at least 2");
    check(cfg.object.height >= 2, text, source, "object", "height", "must be at least 2");
    check(cfg.object.background >= 0 && cfg.object.background <= 1, text, source, "object", "background",
          "must lie in [0, 1]");
  }
  if (const json* n = top.child("scan")) {
    SectionReader r(*n, "scan", text, source);
    r.read("n_per_side", cfg.scan.n_per_side);
    r.read("step_px", cfg.scan.step);
    r.reject_unknown();
    check(cfg.scan.n_per_side >= 1, text, source, "scan", "n_per_side", "must be at least 1");
    check(cfg.scan.step >= 1, text, source, "scan", "step_px", "must be at least 1");
  }
  if (const json* n = top.child("speckle")) {
    SectionReader r(*n, "speckle", text, source);
    r.read("seed", cfg.speckle.seed);
    r.read("correlation_length_px", cfg.speckle.correlation_length);
    r.reject_unknown();
    check(cfg.speckle.correlation_length >= 0, text, source, "speckle", "correlation_length_px", "must be >= 0");
  }
  if (const json* n = top.child("noise")) {
    SectionReader r(*n, "noise", text, source);
    r.read("variance_ratio", cfg.noise_variance_ratio);
    r.reject_unknown();
    check(cfg.noise_variance_ratio >= 0, text, source, "noise", "variance_ratio", "must be >= 0");
  }
  if (const json* n = top.child("tpe")) {
    SectionReader r(*n, "tpe", text, source);
    r.read("reference_index", cfg.tpe.reference_index);
    r.read("floor", cfg.tpe.floor);
    r.read_enum("correlation", {{"circular", [&] { cfg.tpe.mode = CorrelationMode::circular; }},
                                {"padded", [&] { cfg.tpe.mode = CorrelationMode::padded; }}});
    r.reject_unknown();
    check(cfg.tpe.floor > 0, text, source, "tpe", "floor", "must be positive");
  }
  if (const json* n = top.child("recon")) {
    SectionReader r(*n, "recon", text, source);
    r.read("max_iterations", cfg.recon.max_iterations);
    r.read("convergence_tolerance", cfg.recon.convergence_tolerance);
    r.read_enum("frame_order", {{"sequential", [&] { cfg.recon.frame_order = FrameOrder::sequential; }},
                                {"seeded-random", [&] { cfg.recon.frame_order = FrameOrder::seeded_random; }}});
    r.read("order_seed", cfg.recon.order_seed);
    r.read("clamp_nonnegative", cfg.recon.clamp_nonnegative);
    r.reject_unknown();
    check(cfg.recon.max_iterations >= 1, text, source, "recon", "max_iterations", "must be at least 1");
    check(cfg.recon.convergence_tolerance >= 0, text, source, "recon", "convergence_tolerance", "must be >= 0");
  }
  if (const json* n = top.child("sweep")) {
    SectionReader r(*n, "sweep", text, source);
    r.read("levels", cfg.sweep.levels);
    r.read("trials", cfg.sweep.trials);
    r.reject_unknown();
    check(!cfg.sweep.levels.empty(), text, source, "sweep", "levels", "must not be empty");
    check(std::all_of(cfg.sweep.levels.begin(), cfg.sweep.levels.end(), [](double l) { return l >= 0.0; }), text,
          source, "sweep", "levels", "must all be >= 0");
    check(cfg.sweep.trials >= 1, text, source, "sweep", "trials", "must be at least 1");
  }
  if (const json* n = top.child("paths")) {
    SectionReader r(*n, "paths", text, source);
    r.read("out_dir", cfg.paths.out_dir);
    r.read("frames_dir", cfg.paths.frames_dir);
    r.read("positions", cfg.paths.positions);
    r.read("object", cfg.paths.object);
    r.reject_unknown();
  }
  top.reject_unknown();

  cfg.validate();
  return cfg;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const FormatError& e) {
    throw ConfigError(e.what());
  }
  return parse_config(text, path.string());
}

}  // namespace ifp
