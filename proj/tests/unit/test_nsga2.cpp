#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "mobons/metrics.hpp"
#include "mobons/nsga2.hpp"
#include "mobons/problems.hpp"
#include "oracles.hpp"

using namespace mobons;

namespace {

std::vector<std::vector<std::size_t>> sorted_fronts(std::vector<std::vector<std::size_t>> fronts) {
  for (auto& f : fronts) std::sort(f.begin(), f.end());
  return fronts;
}

}  // namespace

TEST_SUITE("nsga2") {

TEST_CASE("dominance") {
  CHECK(dominates(std::vector<double>{0, 1}, std::vector<double>{1, 1}));
  CHECK_FALSE(dominates(std::vector<double>{1, 1}, std::vector<double>{1, 1}));
  CHECK_FALSE(dominates(std::vector<double>{0, 2}, std::vector<double>{1, 1}));
}

TEST_CASE("nondominated sort examples") {
  const auto f = sorted_fronts(nondominated_sort({{0, 1}, {1, 0}, {1, 1}}));
  REQUIRE(f.size() == 2);
  CHECK(f[0] == std::vector<std::size_t>{0, 1});
  CHECK(f[1] == std::vector<std::size_t>{2});
  const auto same = nondominated_sort({{2, 2}, {2, 2}, {2, 2}});
  REQUIRE(same.size() == 1);
  CHECK(same[0].size() == 3);
  CHECK(nondominated_sort({}).empty());
  CHECK_THROWS(nondominated_sort({{1, 2}, {1}}));
}

TEST_CASE("nondominated sort matches the peeling oracle") {
  std::mt19937_64 rng(123);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng() % 200;
    const std::size_t m = 2 + rng() % 2;
    std::vector<std::vector<double>> pts(n, std::vector<double>(m));
    for (auto& p : pts)
      for (auto& v : p) v = static_cast<double>(rng() % 12);  // ties are common
    const auto got = sorted_fronts(nondominated_sort(pts));
    const auto want = sorted_fronts(oracles::peel_fronts(pts));
    CHECK(got == want);
    std::size_t total = 0;
    for (const auto& fr : got) total += fr.size();
    CHECK(total == n);
  }
}

TEST_CASE("crowding distance") {
  const double inf = std::numeric_limits<double>::infinity();
  auto two = crowding_distance({{0, 1}, {1, 0}});
  CHECK(two[0] == inf);
  CHECK(two[1] == inf);
  auto three = crowding_distance({{0, 1}, {0.5, 0.5}, {1, 0}});
  CHECK(three[0] == inf);
  CHECK(three[2] == inf);
  CHECK(three[1] == doctest::Approx(2.0));
  auto ident = crowding_distance({{1, 1}, {1, 1}, {1, 1}, {1, 1}});
  std::size_t finite = 0;
  for (double d : ident)
    if (std::isfinite(d)) {
      ++finite;
      CHECK(d == 0.0);
    }
  CHECK(finite >= 1);
}

TEST_CASE("config validation") {
  NsgaConfig c;
  CHECK_NOTHROW(c.validate());
  c.population_size = 7;
  CHECK_THROWS(c.validate());
  c = NsgaConfig{};
  c.crossover_probability = 1.5;
  CHECK_THROWS(c.validate());
  c = NsgaConfig{};
  c.mutation_eta = 0;
  CHECK_THROWS(c.validate());
  NsgaConfig ok;
  auto p = [](std::span<const double> g) { return Evaluation{{g[0]}, 0.0}; };
  CHECK_THROWS(evolve(p, std::vector<Interval>{}, ok));
  CHECK_THROWS(evolve(p, std::vector<Interval>{{1, 0}}, ok));
}

TEST_CASE("Schaffer problem converges to the analytic front") {
  NsgaConfig c;
  c.population_size = 60;
  c.generations = 100;
  c.seed = 2024;
  const std::vector<Interval> bounds{{-5, 5}};
  auto p = [](std::span<const double> g) {
    return Evaluation{{g[0] * g[0], (g[0] - 2) * (g[0] - 2)}, 0.0};
  };
  // Elitism: per-objective minima never get worse, and no survivor on the
  // first front is dominated by a member of the previous population.
  std::vector<std::vector<double>> previous;
  std::vector<double> best_prev;
  std::size_t generations_seen = 0;
  const auto res = evolve(p, bounds, c, [&](std::size_t, std::span<const Individual> pop) {
    ++generations_seen;
    std::vector<double> best(2, std::numeric_limits<double>::infinity());
    for (const auto& ind : pop)
      for (std::size_t m = 0; m < 2; ++m) best[m] = std::min(best[m], ind.objectives[m]);
    for (std::size_t m = 0; m < best_prev.size(); ++m) CHECK(best[m] <= best_prev[m]);
    for (const auto& ind : pop) {
      if (ind.rank != 0) continue;
      for (const auto& q : previous) CHECK_FALSE(oracles::dominates(q, ind.objectives));
    }
    best_prev = best;
    previous.clear();
    for (const auto& ind : pop) previous.push_back(ind.objectives);
  });
  CHECK(generations_seen == 101);
  REQUIRE(res.feasible);
  REQUIRE(!res.front.empty());
  std::size_t inside = 0;
  std::vector<std::vector<double>> front;
  for (const auto& ind : res.front) {
    if (ind.genome[0] >= -0.05 && ind.genome[0] <= 2.05) ++inside;
    front.push_back(ind.objectives);
    CHECK(ind.genome[0] >= -5);
    CHECK(ind.genome[0] <= 5);
  }
  CHECK(static_cast<double>(inside) >= 0.9 * static_cast<double>(res.front.size()));
  std::vector<std::vector<double>> analytic;
  for (int i = 0; i <= 2000; ++i) {
    const double t = 2.0 * i / 2000;
    analytic.push_back({t * t, (t - 2) * (t - 2)});
  }
  CHECK(oracles::hausdorff(front, analytic) <= 0.1);
  CHECK(res.population.size() == 60);
}

TEST_CASE("constant objectives give a nonempty front") {
  NsgaConfig c;
  c.population_size = 20;
  c.generations = 5;
  auto p = [](std::span<const double>) { return Evaluation{{1.0, 1.0}, 0.0}; };
  const auto res = evolve(p, std::vector<Interval>{{0, 1}, {0, 1}}, c);
  CHECK(!res.front.empty());
  CHECK(res.front.size() == 20);
}

TEST_CASE("evolve is deterministic for a fixed seed") {
  NsgaConfig c;
  c.population_size = 24;
  c.generations = 20;
  c.seed = 9;
  auto p = [](std::span<const double> g) {
    return Evaluation{{g[0] + g[1] * g[1], 1 - g[0] + std::sin(3 * g[1])}, std::max(0.0, g[0] - 0.8)};
  };
  const std::vector<Interval> bounds{{0, 1}, {-1, 1}};
  const auto a = evolve(p, bounds, c), b = evolve(p, bounds, c);
  REQUIRE(a.population.size() == b.population.size());
  for (std::size_t i = 0; i < a.population.size(); ++i) CHECK(a.population[i].genome == b.population[i].genome);
  for (const auto& ind : a.front) CHECK(ind.penalty <= c.feasibility_tolerance);
}

TEST_CASE("infeasible problems return the lowest-penalty front") {
  NsgaConfig c;
  c.population_size = 20;
  c.generations = 30;
  auto p = [](std::span<const double> g) { return Evaluation{{g[0], -g[0]}, 1.0 + g[0]}; };
  const auto res = evolve(p, std::vector<Interval>{{0, 1}}, c);
  CHECK_FALSE(res.feasible);
  REQUIRE(!res.front.empty());
  double best = std::numeric_limits<double>::infinity();
  for (const auto& ind : res.population) best = std::min(best, ind.penalty);
  for (const auto& ind : res.front) CHECK(ind.penalty == best);
  CHECK(best <= 1.0 + 1e-3);
}

TEST_CASE("equality-penalized cyclic toy reaches the fixed-point manifold") {
  const auto toy = build_cyclic_toy();
  const auto& net = toy.network;
  std::vector<Interval> bounds(net.design_box().begin(), net.design_box().end());
  for (const auto& node : net.nodes()) bounds.push_back(node.output_box);
  const std::size_t d = net.design_dim(), k = net.node_count();
  auto problem = [&](std::span<const double> g) {
    const auto x = g.first(d), y = g.subspan(d, k);
    double pen = 0;
    for (std::size_t i = 0; i < k; ++i)
      pen = std::max(pen, std::abs(y[i] - toy.evaluators[i](net.assemble_node_input(i, x, y))));
    return Evaluation{net.project_objectives(y), pen};
  };
  NsgaConfig c;
  c.population_size = 60;
  c.generations = 200;
  c.seed = 5;
  c.feasibility_tolerance = 1e-3;
  const auto res = evolve(problem, bounds, c);
  REQUIRE(!res.front.empty());
  FixedPointOptions fp;
  fp.damping = 1.0;
  fp.tolerance = 1e-13;
  for (const auto& ind : res.front) {
    CHECK(ind.penalty <= 1e-3);
    const std::vector<double> x(ind.genome.begin(), ind.genome.begin() + static_cast<long>(d));
    const auto state = solve_fixed_point(net, toy.evaluators, x, fp);
    REQUIRE(state.converged);
    for (std::size_t i = 0; i < k; ++i) CHECK(std::abs(ind.genome[d + i] - state.outputs[i]) <= 1e-2);
  }
}

TEST_CASE("population CSV") {
  std::vector<Individual> pop(2);
  pop[0] = {{0.5, 0.25}, {1, 2}, 0.0, 0, 0.0};
  pop[1] = {{0.1, 0.2}, {3, 4}, 0.5, 1, 0.0};
  std::ostringstream os;
  write_population_csv(os, 3, pop, true);
  const auto s = os.str();
  CHECK(s.rfind("generation,rank,penalty,f0,f1,x0,x1\n", 0) == 0);
  CHECK(s.find("\n3,1,0.5,3,4,0.1,0.2") != std::string::npos);
}

}  // TEST_SUITE
