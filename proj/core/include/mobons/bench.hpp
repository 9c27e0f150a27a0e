#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mobons/config.hpp"
#include "mobons/problems.hpp"

namespace mobons {

struct ReplicateOutcome {
  Algorithm algorithm = Algorithm::Mobons;
  std::size_t replicate = 0;
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  std::uint64_t initial_design_hash = 0;
  /// Archive hypervolume after the initial design and after each evaluation.
  std::vector<double> hypervolume;
  /// Objectives and feasibility of every evaluation, in order.
  std::vector<std::vector<double>> objectives;
  std::vector<bool> feasible;
  double seconds = 0.0;
};

struct AlgorithmSummary {
  Algorithm algorithm = Algorithm::Mobons;
  std::size_t completed = 0;
  std::vector<double> median_curve;
  std::vector<double> lower_quartile_curve;
  std::vector<double> upper_quartile_curve;
  std::vector<double> final_hypervolumes;
  double median_final = 0.0;
  /// Replicate whose final hypervolume is the (lower) median.
  std::size_t median_replicate = 0;
};

struct BenchReport {
  std::string problem;
  std::optional<double> max_hypervolume;
  std::vector<ReplicateOutcome> outcomes;
  std::vector<AlgorithmSummary> summaries;
  /// Every replicate's algorithms saw the same initial designs.
  bool consistent_initial_designs = true;

  const AlgorithmSummary* summary(Algorithm algorithm) const;
};

/// Called after each replicate finishes, from the worker that ran it.
using BenchProgress = std::function<void(const ReplicateOutcome&)>;

/// Replicate i of every algorithm runs with seed base + i. Replicates run on
/// up to settings.workers threads; a failed replicate is recorded and the
/// study continues. When out_dir is non-empty, per-run logs and summaries
/// plus bench_report.json, hv_curves.csv and scatter_<algo>.csv are written.
BenchReport bench(const ProblemSpec& problem, const AppConfig& config, const std::filesystem::path& out_dir = {},
                  const BenchProgress& progress = {});

/// Linear-interpolated quantile of unsorted values (q in [0, 1]).
double quantile(std::vector<double> values, double q);

void write_bench_outputs(const std::filesystem::path& out_dir, const BenchReport& report, const AppConfig& config);

}  // namespace mobons
