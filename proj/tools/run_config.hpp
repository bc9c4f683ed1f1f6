#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "entflow/kan.hpp"
#include "entflow/system_spec.hpp"

namespace entflow::cli {

// Declarative run configuration: flat "key = value" text, '#' comments,
// unknown keys rejected. See the README for the key schema.
struct RunConfig {
  SystemSpec spec;
  bool explicit_barrier = false;  // v_left/v_right set directly instead of via h

  std::vector<double> u_grid;
  std::vector<double> h_grid;

  int spline_knots = 8;
  bool spline_fit = false;

  KanConfig kan;

  std::uint64_t seed = 0;
  int workers = 1;
  std::string out_dir = "out";
  bool plot = false;

  void apply_file(const std::filesystem::path& path);
  void apply_entry(const std::string& key, const std::string& value,
                   const std::string& where);

  // Deterministic serialization of all result-affecting keys (runtime keys
  // such as workers/out_dir/plot are excluded), and its FNV-1a fingerprint.
  std::string canonical_text() const;
  std::string config_hash() const;

  // Validation shared by all commands (grids and KAN checked by their users).
  void finalize();
};

RunConfig preset(const std::string& name);
std::vector<std::pair<std::string, std::string>> preset_catalog();

// "a,b,c" or "lo:hi:step" (inclusive hi, positive step).
std::vector<double> parse_grid(const std::string& text, const std::string& key);

}  // namespace entflow::cli
