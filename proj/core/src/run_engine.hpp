#pragma once

#include <chrono>
#include <functional>
#include <span>
#include <vector>

#include "mobons/mobons.hpp"

namespace mobons::detail {

/// Bookkeeping shared by every algorithm: initial designs, true-network
/// solves, the record log, the archive and the hypervolume trajectory.
class RunEngine {
 public:
  RunEngine(const FunctionNetwork& net, std::span<const NodeFunction> evaluators, const RunConfig& config,
            const RecordObserver& observer, Algorithm algorithm);

  const std::vector<std::vector<double>>& designs() const { return designs_; }
  const std::vector<std::vector<double>>& history() const { return history_; }
  std::size_t remaining() const { return config_.total_budget - result_.records.size(); }
  RunResult& result() { return result_; }

  /// True network state at x.
  NetworkState solve(std::span<const double> x) const;

  /// Logs the initial designs. `fill` may add node queries to record i
  /// before its true state is attached.
  void record_initial(const std::function<void(std::size_t i, EvaluationRecord& r)>& fill = {});

  /// Attaches the true state, updates the archive and trajectory, notifies.
  void commit(EvaluationRecord record, const NetworkState& state);

  RunResult finish();

 private:
  void append(EvaluationRecord record, const NetworkState& state, bool extend_trajectory);

  const FunctionNetwork& net_;
  std::span<const NodeFunction> evaluators_;
  const RunConfig& config_;
  const RecordObserver& observer_;
  std::chrono::steady_clock::time_point start_;
  std::vector<std::vector<double>> designs_;
  std::vector<std::vector<double>> history_;
  RunResult result_;
};

}  // namespace mobons::detail
