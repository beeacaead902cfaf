#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "covertnet/experiments.hpp"
#include "covertnet/model.hpp"
#include "covertnet/optimizer.hpp"

#include "json.hpp"

namespace covertnet {

/// Closed-form detection grid for the `detect` command.
struct DetectGrid {
  std::vector<double> d_aw = {2, 4, 6, 8, 10, 12, 14, 16, 18, 20};
  std::vector<double> d_jw = {2, 4, 6, 8, 10, 12, 14, 16, 18, 20};
  double p_j = 1.0;
};

/// Bob's distance over 5..12 m, 500 trials.
SweepSpec default_sweep();

/// Everything a CLI run needs. Omitted keys take the reference simulation
/// values; unknown keys are rejected.
struct RunConfig {
  /// Receiver noise in dBW as written in the file; params.noise holds watts.
  struct NoiseDbw {
    double bob = -30.0;
    double carol = -30.0;
    double untrusted = -30.0;
    double willie = -30.0;
  };

  SystemParams params;
  NoiseDbw noise_dbw;
  Topology topo = Topology::reference();
  SweepSpec sweep = default_sweep();
  SolveOptions solver;
  DetectGrid detect;
  std::string out_dir = "out";
  std::uint64_t seed = 20240101;
};

/// Config error; field() is the dotted key path.
using ConfigError = ValidationError;

RunConfig parse_config(const nlohmann::json& doc);
RunConfig parse_config(const std::filesystem::path& path);

/// The fully resolved configuration, every key present.
nlohmann::json to_json(const RunConfig& cfg);

/// 64-bit FNV-1a of the resolved configuration (output directory excluded).
std::uint64_t params_hash(const RunConfig& cfg);

}  // namespace covertnet
