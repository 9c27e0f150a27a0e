#include "mobons/problems.hpp"

#include <stdexcept>

#include "mobons/registry.hpp"

namespace mobons {

namespace {

NodeFunction builtin(const std::string& name, std::vector<double> params = {}) {
  return EvaluatorRegistry::builtin().make(name, params);
}

}  // namespace

ProblemSpec build_zdt4_network() {
  constexpr std::size_t d = 10;
  std::vector<Interval> box(d, Interval{-10.0, 10.0});
  box[0] = {0.0, 1.0};

  std::vector<NodeSpec> nodes;
  std::vector<NodeFunction> evals;
  nodes.push_back({"y0", NodeKind::BlackBox, {0}, {}, {0.0, 1.0}});
  evals.push_back(builtin("identity"));
  for (std::size_t k = 1; k < d; ++k) {
    nodes.push_back({"y" + std::to_string(k), NodeKind::BlackBox, {k}, {}, {-10.0, 110.0}});
    evals.push_back(builtin("zdt4_multimodal"));
  }
  std::vector<std::size_t> upstream(d);
  for (std::size_t k = 0; k < d; ++k) upstream[k] = k;
  nodes.push_back({"y10", NodeKind::WhiteBox, {}, upstream, {0.0, 1081.0}});
  evals.push_back(builtin("zdt4_tradeoff"));

  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(2, 11);
  c(0, 0) = 1.0;
  c(1, 10) = 1.0;
  return {"zdt4", FunctionNetwork(std::move(box), std::move(nodes), c), std::move(evals), {1.0, 500.0},
          499.0 + 2.0 / 3.0};
}

namespace {

struct ToyParts {
  std::vector<NodeSpec> nodes;
  std::vector<NodeFunction> evals;
};

ToyParts cyclic_parts() {
  ToyParts p;
  p.nodes.push_back({"y0", NodeKind::BlackBox, {0}, {1}, {-0.1, 1.1}});
  p.evals.push_back(builtin("affine", {0.0, 1.0, 0.5}));
  p.nodes.push_back({"y1", NodeKind::BlackBox, {}, {0}, {-0.1, 0.6}});
  p.evals.push_back(builtin("affine", {0.0, 0.5}));
  p.nodes.push_back({"y2", NodeKind::WhiteBox, {}, {0}, {0.0, 1.3}});
  p.evals.push_back(builtin("square_shift", {1.0}));
  return p;
}

}  // namespace

ProblemSpec build_cyclic_toy() {
  auto p = cyclic_parts();
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(2, 3);
  c(0, 0) = 1.0;
  c(1, 2) = 1.0;
  // Front: g2 = (g1 - 1)^2 for g1 in [0, 1]; the area under it is 1/3.
  return {"cyclic", FunctionNetwork({{0.0, 0.75}}, std::move(p.nodes), c), std::move(p.evals), {1.1, 1.1},
          1.1 * 1.1 - 1.0 / 3.0};
}

ProblemSpec build_constrained_toy() {
  auto p = cyclic_parts();
  p.nodes.push_back({"y3", NodeKind::WhiteBox, {}, {0}, {-0.9, 0.3}});
  p.evals.push_back(builtin("affine", {-0.8, 1.0}));
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(2, 4);
  c(0, 0) = 1.0;
  c(1, 2) = 1.0;
  Eigen::MatrixXd cons = Eigen::MatrixXd::Zero(1, 4);
  cons(0, 3) = 1.0;
  return {"constrained", FunctionNetwork({{0.0, 0.75}}, std::move(p.nodes), c, cons), std::move(p.evals),
          {1.1, 1.1}, std::nullopt};
}

ProblemSpec make_problem(const std::string& id) {
  if (id == "zdt4") return build_zdt4_network();
  if (id == "cyclic") return build_cyclic_toy();
  if (id == "constrained") return build_constrained_toy();
  throw std::invalid_argument("unknown problem '" + id + "' (expected zdt4, cyclic or constrained)");
}

std::vector<std::string> problem_ids() { return {"zdt4", "cyclic", "constrained"}; }

}  // namespace mobons
