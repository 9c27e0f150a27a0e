#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace mobons {

/// Scalar node function: maps a node-input vector z_k to y_k.
using NodeFunction = std::function<double(std::span<const double>)>;

struct Interval {
  double lower = 0.0;
  double upper = 1.0;

  double width() const { return upper - lower; }
  double midpoint() const { return 0.5 * (lower + upper); }
  bool contains(double v) const { return v >= lower && v <= upper; }
};

enum class NodeKind { BlackBox, WhiteBox };

std::string to_string(NodeKind kind);
NodeKind node_kind_from_string(const std::string& name);

/// Structural description of one node. The evaluator is supplied separately
/// so the same wiring can be driven by true functions, Thompson samples or
/// posterior means.
struct NodeSpec {
  std::string name;
  NodeKind kind = NodeKind::BlackBox;
  std::vector<std::size_t> design_inputs;  // I(k), 0-based, ascending
  std::vector<std::size_t> node_inputs;    // J(k), 0-based, ascending
  Interval output_box;
};

/// Thrown when a node evaluator fails or produces a non-finite value.
class NodeEvaluationError : public std::runtime_error {
 public:
  NodeEvaluationError(std::size_t node, const std::string& what);
  std::size_t node() const { return node_; }

 private:
  std::size_t node_;
};

using Edge = std::pair<std::size_t, std::size_t>;

/// Directed (possibly cyclic) network of scalar functions.
///
/// Immutable after construction. Node inputs are ordered design entries
/// first, then node outputs, ascending within each block.
class FunctionNetwork {
 public:
  FunctionNetwork(std::vector<Interval> design_box, std::vector<NodeSpec> nodes,
                  Eigen::MatrixXd objective_matrix,
                  std::optional<Eigen::MatrixXd> constraint_matrix = std::nullopt);

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t design_dim() const { return design_box_.size(); }
  std::size_t objective_count() const { return static_cast<std::size_t>(objective_.rows()); }
  std::size_t constraint_count() const {
    return constraint_ ? static_cast<std::size_t>(constraint_->rows()) : 0;
  }

  const NodeSpec& node(std::size_t k) const { return nodes_.at(k); }
  std::span<const NodeSpec> nodes() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::span<const Interval> design_box() const { return design_box_; }
  const Eigen::MatrixXd& objective_matrix() const { return objective_; }
  const std::optional<Eigen::MatrixXd>& constraint_matrix() const { return constraint_; }

  std::size_t input_dim(std::size_t k) const;
  /// Z_k = X_{I(k)} x Y_{J(k)}
  std::vector<Interval> input_box(std::size_t k) const;
  std::vector<double> output_midpoint() const;

  void assemble_node_input(std::size_t k, std::span<const double> x, std::span<const double> y,
                           std::span<double> out) const;
  std::vector<double> assemble_node_input(std::size_t k, std::span<const double> x,
                                          std::span<const double> y) const;

  /// Topological order (Kahn, smallest index first) when the graph is a DAG.
  const std::optional<std::vector<std::size_t>>& topological_order() const { return topo_; }
  bool is_acyclic() const { return topo_.has_value(); }

  std::vector<double> project_objectives(std::span<const double> y) const;
  std::vector<double> project_constraints(std::span<const double> y) const;

 private:
  std::vector<Interval> design_box_;
  std::vector<NodeSpec> nodes_;
  std::vector<Edge> edges_;
  Eigen::MatrixXd objective_;
  std::optional<Eigen::MatrixXd> constraint_;
  std::optional<std::vector<std::size_t>> topo_;
};

struct NetworkState {
  std::vector<double> design;
  std::vector<double> outputs;
  double residual = 0.0;
  bool converged = false;
  std::size_t iterations = 0;
};

struct FixedPointOptions {
  double damping = 0.5;
  double tolerance = 1e-8;
  std::size_t max_iterations = 200;

  void validate() const;
};

/// Forward propagation in topological order. Requires an acyclic network.
NetworkState evaluate_acyclic(const FunctionNetwork& net, std::span<const NodeFunction> evaluators,
                              std::span<const double> x);

/// Damped Gauss-Seidel fixed-point iteration on Y = F(x, Y).
///
/// Sweeps nodes in topological order when the graph is acyclic and in index
/// order otherwise, so damping = 1 on a DAG reproduces evaluate_acyclic after
/// one sweep. Non-convergence is reported through NetworkState::converged;
/// a non-finite node output throws NodeEvaluationError.
NetworkState solve_fixed_point(const FunctionNetwork& net, std::span<const NodeFunction> evaluators,
                               std::span<const double> x, const FixedPointOptions& options,
                               std::span<const double> initial_outputs);

/// Same, starting from the midpoint of every node's output box.
NetworkState solve_fixed_point(const FunctionNetwork& net, std::span<const NodeFunction> evaluators,
                               std::span<const double> x, const FixedPointOptions& options);

/// evaluate_acyclic for DAGs, solve_fixed_point otherwise.
NetworkState evaluate_network(const FunctionNetwork& net, std::span<const NodeFunction> evaluators,
                              std::span<const double> x, const FixedPointOptions& options);

/// max_k |y_k - f_k(z_k)|
double network_residual(const FunctionNetwork& net, std::span<const NodeFunction> evaluators,
                        std::span<const double> x, std::span<const double> y);

}  // namespace mobons
