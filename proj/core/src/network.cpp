#include "mobons/network.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>
#include <sstream>

namespace mobons {

std::string to_string(NodeKind kind) {
  return kind == NodeKind::WhiteBox ? "white-box" : "black-box";
}

NodeKind node_kind_from_string(const std::string& name) {
  if (name == "white-box" || name == "whitebox" || name == "white") return NodeKind::WhiteBox;
  if (name == "black-box" || name == "blackbox" || name == "black") return NodeKind::BlackBox;
  throw std::invalid_argument("unknown node kind '" + name + "'");
}

NodeEvaluationError::NodeEvaluationError(std::size_t node, const std::string& what)
    : std::runtime_error("node " + std::to_string(node) + ": " + what), node_(node) {}

namespace {

void normalize_indices(std::vector<std::size_t>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

std::optional<std::vector<std::size_t>> kahn_order(std::size_t k_count,
                                                   const std::vector<Edge>& edges) {
  std::vector<std::size_t> indegree(k_count, 0);
  std::vector<std::vector<std::size_t>> out(k_count);
  for (auto [from, to] : edges) {
    out[from].push_back(to);
    ++indegree[to];
  }
  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
  for (std::size_t k = 0; k < k_count; ++k)
    if (indegree[k] == 0) ready.push(k);

  std::vector<std::size_t> order;
  order.reserve(k_count);
  while (!ready.empty()) {
    auto k = ready.top();
    ready.pop();
    order.push_back(k);
    for (auto next : out[k])
      if (--indegree[next] == 0) ready.push(next);
  }
  if (order.size() != k_count) return std::nullopt;
  return order;
}

}  // namespace

FunctionNetwork::FunctionNetwork(std::vector<Interval> design_box, std::vector<NodeSpec> nodes,
                                 Eigen::MatrixXd objective_matrix,
                                 std::optional<Eigen::MatrixXd> constraint_matrix)
    : design_box_(std::move(design_box)),
      nodes_(std::move(nodes)),
      objective_(std::move(objective_matrix)),
      constraint_(std::move(constraint_matrix)) {
  if (design_box_.empty()) throw std::invalid_argument("design dimension must be >= 1");
  if (nodes_.empty()) throw std::invalid_argument("network needs at least one node");
  for (std::size_t d = 0; d < design_box_.size(); ++d) {
    const auto& b = design_box_[d];
    if (!(b.lower < b.upper) || !std::isfinite(b.lower) || !std::isfinite(b.upper))
      throw std::invalid_argument("design box dimension " + std::to_string(d) +
                                  " needs finite lower < upper");
  }

  const auto k_count = nodes_.size();
  for (std::size_t k = 0; k < k_count; ++k) {
    auto& node = nodes_[k];
    if (node.name.empty()) node.name = "y" + std::to_string(k);
    normalize_indices(node.design_inputs);
    normalize_indices(node.node_inputs);
    for (auto d : node.design_inputs)
      if (d >= design_box_.size())
        throw std::invalid_argument("node " + std::to_string(k) + ": design input " +
                                    std::to_string(d) + " out of range");
    for (auto j : node.node_inputs) {
      if (j >= k_count)
        throw std::invalid_argument("node " + std::to_string(k) + ": node input " +
                                    std::to_string(j) + " out of range");
      edges_.emplace_back(j, k);
    }
    if (!(node.output_box.lower < node.output_box.upper))
      throw std::invalid_argument("node " + std::to_string(k) + ": output box needs lower < upper");
  }
  std::sort(edges_.begin(), edges_.end());

  if (objective_.rows() < 1 || static_cast<std::size_t>(objective_.cols()) != k_count)
    throw std::invalid_argument("objective matrix must have M >= 1 rows and K columns");
  if (constraint_ && static_cast<std::size_t>(constraint_->cols()) != k_count)
    throw std::invalid_argument("constraint matrix must have K columns");
  if (constraint_ && constraint_->rows() == 0) constraint_.reset();

  topo_ = kahn_order(k_count, edges_);
}

std::size_t FunctionNetwork::input_dim(std::size_t k) const {
  const auto& n = nodes_.at(k);
  return n.design_inputs.size() + n.node_inputs.size();
}

std::vector<Interval> FunctionNetwork::input_box(std::size_t k) const {
  const auto& n = nodes_.at(k);
  std::vector<Interval> box;
  box.reserve(input_dim(k));
  for (auto d : n.design_inputs) box.push_back(design_box_[d]);
  for (auto j : n.node_inputs) box.push_back(nodes_[j].output_box);
  return box;
}

std::vector<double> FunctionNetwork::output_midpoint() const {
  std::vector<double> y(nodes_.size());
  for (std::size_t k = 0; k < nodes_.size(); ++k) y[k] = nodes_[k].output_box.midpoint();
  return y;
}

void FunctionNetwork::assemble_node_input(std::size_t k, std::span<const double> x,
                                          std::span<const double> y, std::span<double> out) const {
  const auto& n = nodes_[k];
  std::size_t i = 0;
  for (auto d : n.design_inputs) out[i++] = x[d];
  for (auto j : n.node_inputs) out[i++] = y[j];
}

std::vector<double> FunctionNetwork::assemble_node_input(std::size_t k, std::span<const double> x,
                                                         std::span<const double> y) const {
  if (x.size() != design_dim() || y.size() != node_count())
    throw std::invalid_argument("assemble_node_input: x must have length D and Y length K");
  std::vector<double> z(input_dim(k));
  assemble_node_input(k, x, y, z);
  return z;
}

std::vector<double> FunctionNetwork::project_objectives(std::span<const double> y) const {
  Eigen::Map<const Eigen::VectorXd> ym(y.data(), static_cast<Eigen::Index>(y.size()));
  Eigen::VectorXd g = objective_ * ym;
  return {g.data(), g.data() + g.size()};
}

std::vector<double> FunctionNetwork::project_constraints(std::span<const double> y) const {
  if (!constraint_) return {};
  Eigen::Map<const Eigen::VectorXd> ym(y.data(), static_cast<Eigen::Index>(y.size()));
  Eigen::VectorXd h = (*constraint_) * ym;
  return {h.data(), h.data() + h.size()};
}

void FixedPointOptions::validate() const {
  if (!(damping > 0.0 && damping <= 1.0)) throw std::invalid_argument("damping must lie in (0, 1]");
  if (!(tolerance > 0.0)) throw std::invalid_argument("fixed-point tolerance must be > 0");
  if (max_iterations < 1) throw std::invalid_argument("max_iterations must be >= 1");
}

namespace {

class NodeCaller {
 public:
  NodeCaller(const FunctionNetwork& net, std::span<const NodeFunction> evaluators)
      : net_(net), evaluators_(evaluators) {
    if (evaluators.size() != net.node_count())
      throw std::invalid_argument("need exactly one evaluator per node");
    std::size_t max_dim = 0;
    for (std::size_t k = 0; k < net.node_count(); ++k) max_dim = std::max(max_dim, net.input_dim(k));
    buffer_.resize(max_dim);
  }

  double operator()(std::size_t k, std::span<const double> x, std::span<const double> y) {
    std::span<double> z(buffer_.data(), net_.input_dim(k));
    net_.assemble_node_input(k, x, y, z);
    double v;
    try {
      v = evaluators_[k](z);
    } catch (const NodeEvaluationError&) {
      throw;
    } catch (const std::exception& e) {
      throw NodeEvaluationError(k, e.what());
    }
    if (!std::isfinite(v)) throw NodeEvaluationError(k, "non-finite output");
    return v;
  }

 private:
  const FunctionNetwork& net_;
  std::span<const NodeFunction> evaluators_;
  std::vector<double> buffer_;
};

void check_design(const FunctionNetwork& net, std::span<const double> x) {
  if (x.size() != net.design_dim())
    throw std::invalid_argument("design vector has length " + std::to_string(x.size()) +
                                ", expected " + std::to_string(net.design_dim()));
}

}  // namespace

NetworkState evaluate_acyclic(const FunctionNetwork& net, std::span<const NodeFunction> evaluators,
                              std::span<const double> x) {
  if (!net.is_acyclic()) throw std::logic_error("evaluate_acyclic called on a cyclic network");
  check_design(net, x);
  NodeCaller call(net, evaluators);
  NetworkState state;
  state.design.assign(x.begin(), x.end());
  state.outputs.assign(net.node_count(), 0.0);
  for (auto k : *net.topological_order()) state.outputs[k] = call(k, x, state.outputs);
  state.residual = 0.0;
  state.converged = true;
  state.iterations = 1;
  return state;
}

NetworkState solve_fixed_point(const FunctionNetwork& net, std::span<const NodeFunction> evaluators,
                               std::span<const double> x, const FixedPointOptions& options,
                               std::span<const double> initial_outputs) {
  options.validate();
  check_design(net, x);
  const auto k_count = net.node_count();
  if (initial_outputs.size() != k_count)
    throw std::invalid_argument("initial outputs must have length K");

  std::vector<std::size_t> sweep;
  if (net.is_acyclic()) {
    sweep = *net.topological_order();
  } else {
    sweep.resize(k_count);
    for (std::size_t k = 0; k < k_count; ++k) sweep[k] = k;
  }

  NodeCaller call(net, evaluators);
  NetworkState state;
  state.design.assign(x.begin(), x.end());
  state.outputs.assign(initial_outputs.begin(), initial_outputs.end());
  auto& y = state.outputs;

  auto residual = [&] {
    double r = 0.0;
    for (std::size_t k = 0; k < k_count; ++k) r = std::max(r, std::abs(y[k] - call(k, x, y)));
    return r;
  };

  for (std::size_t it = 0;; ++it) {
    state.residual = residual();
    state.iterations = it;
    if (state.residual <= options.tolerance) {
      state.converged = true;
      return state;
    }
    if (it == options.max_iterations) break;
    for (auto k : sweep) {
      const double fk = call(k, x, y);
      y[k] = options.damping == 1.0 ? fk : (1.0 - options.damping) * y[k] + options.damping * fk;
    }
  }
  state.converged = false;
  return state;
}

NetworkState solve_fixed_point(const FunctionNetwork& net, std::span<const NodeFunction> evaluators,
                               std::span<const double> x, const FixedPointOptions& options) {
  const auto y0 = net.output_midpoint();
  return solve_fixed_point(net, evaluators, x, options, y0);
}

NetworkState evaluate_network(const FunctionNetwork& net, std::span<const NodeFunction> evaluators,
                              std::span<const double> x, const FixedPointOptions& options) {
  if (net.is_acyclic()) return evaluate_acyclic(net, evaluators, x);
  return solve_fixed_point(net, evaluators, x, options);
}

double network_residual(const FunctionNetwork& net, std::span<const NodeFunction> evaluators,
                        std::span<const double> x, std::span<const double> y) {
  check_design(net, x);
  if (y.size() != net.node_count()) throw std::invalid_argument("Y must have length K");
  NodeCaller call(net, evaluators);
  double r = 0.0;
  for (std::size_t k = 0; k < net.node_count(); ++k) r = std::max(r, std::abs(y[k] - call(k, x, y)));
  return r;
}

}  // namespace mobons
