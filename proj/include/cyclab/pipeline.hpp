#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "cyclab/generators.hpp"

namespace cyclab {

inline constexpr const char* kVersion = "1.0.0";

/// One pipeline stage. Only the fields read by `op` matter; the rest keep
/// their defaults and are still echoed into the report.
///
///   profile   residual of `target` against {p(z) w} over `degrees`, w = 1 or rho
///   alpha     slit decomposition on a grid (`grid_nx` x `grid_ny`, `grid_step`;
///             zeros mean: fit the bounding box at the generator step)
///   rho       conjugate fits per level (`degree_cap`), then rho
///   cyclic    cyclicity test of the default targets, p = `norm`, up to `degree_max`
///   stirling  Taylor remainder table for k = 0..`k_max` (grid step `step`)
///   gauss     hat function on [-half, half]^2, weight e^{-c|x|^2}, sup profile
///   mult      phi = z^`power`: multiplicity, cyclic set check, insufficiency
struct StageConfig {
  std::string op;
  std::string target = "conj";  // conj | z | abs2exp | indicator:<atom>
  std::string norm = "2";       // a p > 0, or "sup"
  std::string weight = "one";   // one | rho
  std::vector<int> degrees;     // empty: 0..degree_max
  int degree_max = 30;
  double tol = 1e-3;
  int grid_nx = 0, grid_ny = 0;
  double grid_step = 0.0;
  double eps = 0.05;
  int levels = 4;
  int degree_cap = 12;
  int k_max = 60;
  double step = 0.01;
  double c = 2.0;
  double half = 3.0;
  int power = 2;
  int trials = 20;
};

struct ExperimentConfig {
  std::string name = "experiment";
  std::uint64_t seed = 1;
  bool has_measure = true;  // false: generator.kind == "none"
  GeneratorSpec generator;
  std::vector<StageConfig> stages;
  std::string out_dir = ".";

  nlohmann::json to_json() const;
  // Missing fields take their defaults; unknown ops and bad values throw ConfigError.
  static ExperimentConfig from_json(const nlohmann::json& j);
};

// bergman | circle | stirling | spiral | multiplicity-demo
ExperimentConfig preset_config(const std::string& name);
std::vector<std::string> preset_names();

struct PipelineResult {
  int exit_code = 0;  // 0 ok, 3 config error, 1 other failure
  std::string error;
  std::filesystem::path csv_path;
  std::filesystem::path json_path;
  nlohmann::json summary;
};

// Writes <out_dir>/<name>.csv (long format: stage,series,x,quantity,value) and
// <out_dir>/<name>.json. A failing stage still leaves both files, holding
// everything up to the failure.
PipelineResult run_pipeline(const ExperimentConfig& cfg);

// Versions, seedless numeric constants, and library versions for reports.
nlohmann::json build_info();

}  // namespace cyclab
