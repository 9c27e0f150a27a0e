#include "run_engine.hpp"

#include <stdexcept>

namespace mobons::detail {

RunEngine::RunEngine(const FunctionNetwork& net, std::span<const NodeFunction> evaluators, const RunConfig& config,
                     const RecordObserver& observer, Algorithm algorithm)
    : net_(net), evaluators_(evaluators), config_(config), observer_(observer), start_(std::chrono::steady_clock::now()) {
  config.validate();
  if (evaluators.size() != net.node_count()) throw std::invalid_argument("one evaluator per node is required");
  if (config.reference_point.size() != net.objective_count())
    throw std::invalid_argument("reference point length does not match the number of objectives");
  result_.algorithm = algorithm;
  result_.archive = ParetoArchive(config.reference_point);
  designs_ = initial_designs(net, config.init_budget, config.seed);
  result_.initial_design_hash = hash_designs(designs_);
  result_.records.reserve(config.total_budget);
  result_.hypervolume.reserve(config.total_budget - config.init_budget + 1);
}

NetworkState RunEngine::solve(std::span<const double> x) const {
  return evaluate_network(net_, evaluators_, x, config_.fixed_point);
}

void RunEngine::record_initial(const std::function<void(std::size_t, EvaluationRecord&)>& fill) {
  for (std::size_t i = 0; i < designs_.size(); ++i) {
    EvaluationRecord r;
    r.initial = true;
    r.design = designs_[i];
    if (fill) fill(i, r);
    append(std::move(r), solve(designs_[i]), false);
  }
  result_.hypervolume.push_back(result_.archive.hypervolume());
}

void RunEngine::commit(EvaluationRecord record, const NetworkState& state) {
  append(std::move(record), state, true);
}

void RunEngine::append(EvaluationRecord r, const NetworkState& state, bool extend_trajectory) {
  if (result_.records.size() >= config_.total_budget) throw std::logic_error("evaluation budget exceeded");
  r.index = result_.records.size();
  r.outputs = state.outputs;
  r.objectives = net_.project_objectives(state.outputs);
  r.constraints = net_.project_constraints(state.outputs);
  r.residual = state.residual;
  r.feasible = state.converged;
  for (double h : r.constraints) r.feasible = r.feasible && h <= config_.feasibility_tolerance;
  if (r.node_inputs.empty()) {
    for (std::size_t k = 0; k < net_.node_count(); ++k) {
      r.node_inputs.push_back(net_.assemble_node_input(k, r.design, state.outputs));
      r.observed.push_back(state.outputs[k]);
    }
  }
  r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();

  if (r.feasible) result_.archive.insert(r.index, r.objectives);
  if (extend_trajectory) result_.hypervolume.push_back(result_.archive.hypervolume());
  history_.push_back(r.design);
  result_.records.push_back(std::move(r));
  if (observer_) observer_(result_.records.back(), result_.archive.hypervolume());
}

RunResult RunEngine::finish() { return std::move(result_); }

}  // namespace mobons::detail
