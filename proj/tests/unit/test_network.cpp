#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "mobons/network.hpp"
#include "mobons/problems.hpp"
#include "mobons/registry.hpp"
#include "oracles.hpp"

using namespace mobons;

TEST_SUITE("network") {

TEST_CASE("assemble_node_input gathers design entries then node entries") {
  // node 1 reads x_0 and y_0
  FunctionNetwork net({{0, 10}, {0, 10}},
                      {{"a", NodeKind::BlackBox, {0}, {}, {0, 10}}, {"b", NodeKind::BlackBox, {0}, {0}, {0, 10}}},
                      Eigen::MatrixXd::Identity(2, 2));
  const std::vector<double> x{3, 4}, y{7, 9};
  CHECK(net.assemble_node_input(1, x, y) == std::vector<double>{3, 7});

  FunctionNetwork net2({{0, 1}},
                       {{"a", NodeKind::BlackBox, {0}, {}, {0, 10}}, {"b", NodeKind::BlackBox, {}, {0}, {0, 10}},
                        {"c", NodeKind::BlackBox, {}, {1}, {0, 10}}},
                       Eigen::MatrixXd::Identity(3, 3));
  CHECK(net2.assemble_node_input(2, std::vector<double>{0.5}, std::vector<double>{5, 6, 0}) ==
        std::vector<double>{6});
}

TEST_CASE("assemble_node_input on the ZDT4 tradeoff node") {
  const auto p = build_zdt4_network();
  std::vector<double> y(11, -10.0);
  y[0] = 0.25;
  y[10] = 123.0;
  const auto z = p.network.assemble_node_input(10, std::vector<double>(10, 0.0), y);
  REQUIRE(z.size() == 10);
  CHECK(z[0] == 0.25);
  for (std::size_t i = 1; i < 10; ++i) CHECK(z[i] == -10.0);
}

TEST_CASE("assemble_node_input ignores unrelated entries") {
  const auto p = build_zdt4_network();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-5, 5);
  std::vector<double> x(10), y(11);
  for (auto& v : x) v = u(rng);
  for (auto& v : y) v = u(rng);
  const auto z3 = p.network.assemble_node_input(3, x, y);
  auto x2 = x;
  auto y2 = y;
  for (std::size_t i = 0; i < 10; ++i)
    if (i != 3) x2[i] = u(rng);
  for (auto& v : y2) v = u(rng);
  CHECK(p.network.assemble_node_input(3, x2, y2) == z3);
}

TEST_CASE("edges, node inputs and topological order") {
  auto chain = [](std::vector<std::vector<std::size_t>> inputs) {
    std::vector<NodeSpec> nodes;
    for (std::size_t k = 0; k < inputs.size(); ++k)
      nodes.push_back({"n" + std::to_string(k), NodeKind::BlackBox, {0}, inputs[k], {0, 1}});
    return FunctionNetwork({{0, 1}}, nodes, Eigen::MatrixXd::Identity(1, static_cast<Eigen::Index>(inputs.size())));
  };
  const auto dag = chain({{}, {0}, {1}});
  REQUIRE(dag.is_acyclic());
  CHECK(*dag.topological_order() == std::vector<std::size_t>{0, 1, 2});
  CHECK(dag.edges() == std::vector<Edge>{{0, 1}, {1, 2}});

  const auto cyc = chain({{1}, {0}});
  CHECK_FALSE(cyc.is_acyclic());

  CHECK(build_zdt4_network().network.is_acyclic());
  CHECK_FALSE(build_cyclic_toy().network.is_acyclic());
}

TEST_CASE("construction rejects invalid wiring") {
  const std::vector<Interval> box{{0, 1}};
  CHECK_THROWS_AS(FunctionNetwork(box, {{"a", NodeKind::BlackBox, {1}, {}, {0, 1}}}, Eigen::MatrixXd::Ones(1, 1)),
                  std::invalid_argument);
  CHECK_THROWS_AS(FunctionNetwork(box, {{"a", NodeKind::BlackBox, {0}, {3}, {0, 1}}}, Eigen::MatrixXd::Ones(1, 1)),
                  std::invalid_argument);
  CHECK_THROWS_AS(FunctionNetwork(box, {{"a", NodeKind::BlackBox, {0}, {}, {0, 1}}}, Eigen::MatrixXd::Ones(1, 2)),
                  std::invalid_argument);
  CHECK_THROWS_AS(FunctionNetwork({{1, 0}}, {{"a", NodeKind::BlackBox, {0}, {}, {0, 1}}}, Eigen::MatrixXd::Ones(1, 1)),
                  std::invalid_argument);
  CHECK_THROWS_AS(FunctionNetwork(box, {{"a", NodeKind::BlackBox, {0}, {}, {0, 1}}}, Eigen::MatrixXd::Ones(1, 1),
                                  Eigen::MatrixXd::Ones(1, 2)),
                  std::invalid_argument);
}

TEST_CASE("ZDT4 forward evaluation matches hand values") {
  const auto p = build_zdt4_network();
  std::vector<double> x(10, 0.0);
  x[0] = 0.25;
  auto s = evaluate_acyclic(p.network, p.evaluators, x);
  CHECK(s.outputs[0] == 0.25);
  for (std::size_t k = 1; k < 10; ++k) CHECK(s.outputs[k] == doctest::Approx(-10.0).epsilon(1e-15));
  CHECK(s.outputs[10] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(s.residual == 0.0);
  CHECK(s.converged);
  auto g = p.network.project_objectives(s.outputs);
  CHECK(g[0] == 0.25);
  CHECK(g[1] == doctest::Approx(0.5).epsilon(1e-12));

  x[0] = 1.0;
  g = p.network.project_objectives(evaluate_acyclic(p.network, p.evaluators, x).outputs);
  CHECK(g[0] == 1.0);
  CHECK(std::abs(g[1]) < 1e-12);

  x[0] = 0.0;
  g = p.network.project_objectives(evaluate_acyclic(p.network, p.evaluators, x).outputs);
  CHECK(g[0] == 0.0);
  CHECK(g[1] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("ZDT4 node functions match an independent expression") {
  const auto p = build_zdt4_network();
  std::mt19937_64 rng(11);
  for (int t = 0; t < 50; ++t) {
    std::vector<double> x(10);
    x[0] = std::uniform_real_distribution<double>(0, 1)(rng);
    for (std::size_t i = 1; i < 10; ++i) x[i] = std::uniform_real_distribution<double>(-10, 10)(rng);
    const auto g = p.network.project_objectives(evaluate_acyclic(p.network, p.evaluators, x).outputs);
    const auto expected = oracles::zdt4(x);
    CHECK(g[0] == doctest::Approx(expected[0]).epsilon(1e-12));
    CHECK(g[1] == doctest::Approx(expected[1]).epsilon(1e-12));
  }
}

TEST_CASE("single identity node") {
  FunctionNetwork net({{0, 1}}, {{"a", NodeKind::BlackBox, {0}, {}, {0, 1}}}, Eigen::MatrixXd::Ones(1, 1));
  std::vector<NodeFunction> f{EvaluatorRegistry::builtin().make("identity")};
  CHECK(evaluate_acyclic(net, f, std::vector<double>{0.3}).outputs == std::vector<double>{0.3});
}

TEST_CASE("fixed point of the cyclic toy") {
  const auto p = build_cyclic_toy();
  FixedPointOptions opts{1.0, 1e-10, 200};
  auto s = solve_fixed_point(p.network, p.evaluators, std::vector<double>{0.3}, opts);
  REQUIRE(s.converged);
  CHECK(std::abs(s.outputs[0] - 0.4) <= 1e-8);
  CHECK(std::abs(s.outputs[1] - 0.2) <= 1e-8);
  CHECK(std::abs(s.outputs[2] - 0.36) <= 1e-8);
  const auto g = p.network.project_objectives(s.outputs);
  CHECK(g[0] == doctest::Approx(0.4).epsilon(1e-8));
  CHECK(g[1] == doctest::Approx(0.36).epsilon(1e-8));

  s = solve_fixed_point(p.network, p.evaluators, std::vector<double>{0.0}, opts);
  CHECK(std::abs(s.outputs[0]) <= 1e-8);
  CHECK(std::abs(s.outputs[1]) <= 1e-8);

  // default damping 0.5 still reaches the analytic point
  for (double x : {0.1, 0.45, 0.75}) {
    s = solve_fixed_point(p.network, p.evaluators, std::vector<double>{x}, FixedPointOptions{});
    REQUIRE(s.converged);
    CHECK(std::abs(s.outputs[0] - 4.0 * x / 3.0) <= 1e-7);
    CHECK(std::abs(s.outputs[1] - 2.0 * x / 3.0) <= 1e-7);
  }
}

TEST_CASE("contraction toy converges geometrically") {
  const auto p = build_cyclic_toy();
  const std::vector<double> x{0.6};
  const std::vector<double> y0{1.0, 0.5, 0.0};
  const double r0 = network_residual(p.network, p.evaluators, x, y0);
  REQUIRE(r0 > 0.0);
  for (std::size_t t = 1; t <= 12; ++t) {
    const auto s = solve_fixed_point(p.network, p.evaluators, x, FixedPointOptions{1.0, 1e-300, t}, y0);
    CHECK(s.residual <= std::pow(0.25, static_cast<double>(t)) * r0 + 1e-15);
  }
}

TEST_CASE("fixed point on a DAG reproduces forward propagation") {
  const auto p = build_zdt4_network();
  std::mt19937_64 rng(5);
  for (int t = 0; t < 20; ++t) {
    std::vector<double> x(10);
    x[0] = std::uniform_real_distribution<double>(0, 1)(rng);
    for (std::size_t i = 1; i < 10; ++i) x[i] = std::uniform_real_distribution<double>(-10, 10)(rng);
    const auto fwd = evaluate_acyclic(p.network, p.evaluators, x);
    const auto fp = solve_fixed_point(p.network, p.evaluators, x, FixedPointOptions{1.0, 1e-12, 11},
                                      std::vector<double>(11, 0.0));
    CHECK(fp.converged);
    CHECK(fp.iterations <= 2);
    CHECK(fp.outputs == fwd.outputs);
  }
}

TEST_CASE("reported residual matches an independent recomputation") {
  const auto p = build_cyclic_toy();
  for (std::size_t iters : {1u, 3u, 8u}) {
    const std::vector<double> x{0.5};
    const auto s = solve_fixed_point(p.network, p.evaluators, x, FixedPointOptions{0.7, 1e-300, iters});
    const double y0 = s.outputs[0], y1 = s.outputs[1], y2 = s.outputs[2];
    const double expected = std::max({std::abs(y0 - (0.5 * y1 + 0.5)), std::abs(y1 - 0.5 * y0),
                                      std::abs(y2 - (y0 - 1.0) * (y0 - 1.0))});
    CHECK(std::abs(s.residual - expected) <= 1e-12);
    CHECK_FALSE(s.converged);
  }
}

TEST_CASE("non-finite node output is an error naming the node") {
  FunctionNetwork net({{0, 1}},
                      {{"a", NodeKind::BlackBox, {0}, {}, {0, 1}}, {"b", NodeKind::BlackBox, {}, {0}, {0, 1}}},
                      Eigen::MatrixXd::Identity(2, 2));
  std::vector<NodeFunction> f{[](std::span<const double> z) { return z[0]; },
                              [](std::span<const double>) { return std::nan(""); }};
  try {
    evaluate_acyclic(net, f, std::vector<double>{0.5});
    FAIL("expected an exception");
  } catch (const NodeEvaluationError& e) {
    CHECK(e.node() == 1);
  }
  CHECK_THROWS_AS(solve_fixed_point(net, f, std::vector<double>{0.5}, FixedPointOptions{}), NodeEvaluationError);
}

TEST_CASE("non-convergence is reported, not thrown") {
  // y0 = 2 y1 + x, y1 = y0: expanding map, no convergence
  FunctionNetwork net({{0, 1}},
                      {{"a", NodeKind::BlackBox, {0}, {1}, {-1, 1}}, {"b", NodeKind::BlackBox, {}, {0}, {-1, 1}}},
                      Eigen::MatrixXd::Identity(2, 2));
  std::vector<NodeFunction> f{[](std::span<const double> z) { return z[0] + 2.0 * z[1]; },
                              [](std::span<const double> z) { return z[0]; }};
  const auto s = solve_fixed_point(net, f, std::vector<double>{0.1}, FixedPointOptions{1.0, 1e-8, 20});
  CHECK_FALSE(s.converged);
  CHECK(s.iterations == 20);
}

TEST_CASE("projections") {
  FunctionNetwork net({{0, 1}},
                      {{"a", NodeKind::BlackBox, {0}, {}, {0, 10}}, {"b", NodeKind::BlackBox, {0}, {}, {0, 10}}},
                      Eigen::MatrixXd::Identity(2, 2), Eigen::MatrixXd{{1.0, -1.0}});
  const std::vector<double> y{2, 5};
  CHECK(net.project_objectives(y) == std::vector<double>{2, 5});
  CHECK(net.project_constraints(std::vector<double>{3, 5}) == std::vector<double>{-2});
  FunctionNetwork plain({{0, 1}}, {{"a", NodeKind::BlackBox, {0}, {}, {0, 1}}}, Eigen::MatrixXd::Ones(1, 1));
  CHECK(plain.project_constraints(std::vector<double>{1}).empty());
}

TEST_CASE("fixed point options are validated") {
  CHECK_THROWS(FixedPointOptions{0.0, 1e-8, 10}.validate());
  CHECK_THROWS(FixedPointOptions{1.5, 1e-8, 10}.validate());
  CHECK_THROWS(FixedPointOptions{0.5, 0.0, 10}.validate());
  CHECK_THROWS(FixedPointOptions{0.5, 1e-8, 0}.validate());
}

}  // TEST_SUITE
