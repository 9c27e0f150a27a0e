#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "mobons/mobons.hpp"
#include "mobons/problems.hpp"

namespace mobons {

struct BenchSettings {
  std::size_t replicates = 5;
  std::vector<Algorithm> algorithms{Algorithm::Mobons, Algorithm::Qpots, Algorithm::Random};
  std::size_t workers = 1;
};

struct SensitivitySettings {
  double relative_box = 0.05;
  std::size_t extra_evals = 24;
  std::size_t samples = 8192;
};

/// Everything a config file can set. Exactly one of problem (builtin id) or
/// network_path (network definition file) names the problem.
struct AppConfig {
  RunConfig run;
  std::filesystem::path network_path;
  BenchSettings bench;
  SensitivitySettings sensitivity;
};

/// YAML run configuration; see README for the schema. Throws ConfigError
/// with the offending line for malformed input or unknown keys. A relative
/// network path is resolved against base_dir.
AppConfig parse_config(const std::string& text, const std::string& source = "config",
                       const std::filesystem::path& base_dir = {});
AppConfig load_config(const std::filesystem::path& path);

/// Builtin problem or loaded network file, with the config's reference
/// point applied (falling back to the problem's own).
ProblemSpec resolve_problem(AppConfig& config);

}  // namespace mobons
