#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "mobons/archive.hpp"
#include "mobons/metrics.hpp"
#include "oracles.hpp"

using namespace mobons;

namespace {

std::vector<std::size_t> brute_filter(const std::vector<std::vector<double>>& pts) {
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < pts.size() && !dominated; ++j) dominated = oracles::dominates(pts[j], pts[i]);
    if (!dominated) keep.push_back(i);
  }
  return keep;
}

std::vector<std::vector<double>> random_front(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<std::vector<double>> pts(n);
  for (auto& p : pts) {
    const double t = u(rng);
    p = {t, 1 - std::pow(t, 0.3 + 2 * u(rng))};
  }
  return pts;
}

}  // namespace

TEST_SUITE("metrics") {

TEST_CASE("pareto filter examples") {
  CHECK(pareto_filter({{0, 1}, {1, 0}, {2, 2}}) == std::vector<std::size_t>{0, 1});
  CHECK(pareto_filter({{3, 3}}) == std::vector<std::size_t>{0});
  CHECK(pareto_filter({}).empty());
  CHECK(pareto_filter({{1, 1}, {1, 1}}) == std::vector<std::size_t>{0, 1});
}

TEST_CASE("pareto filter matches brute force and is idempotent") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::vector<double>> pts(100);
    for (auto& p : pts) p = {u(rng), u(rng)};
    const auto got = pareto_filter(pts);
    CHECK(got == brute_filter(pts));
    std::vector<std::vector<double>> sub;
    for (auto i : got) sub.push_back(pts[i]);
    const auto again = pareto_filter(sub);
    CHECK(again.size() == sub.size());
  }
}

TEST_CASE("hypervolume hand values") {
  CHECK(std::abs(hypervolume({{0, 0}}, std::vector<double>{1, 1}) - 1.0) <= 1e-12);
  CHECK(std::abs(hypervolume({{0.25, 0.75}, {0.75, 0.25}}, std::vector<double>{1, 1}) - 0.3125) <= 1e-12);
  CHECK(hypervolume({}, std::vector<double>{1, 1}) == 0.0);
  // Points that do not dominate the reference are excluded.
  CHECK(hypervolume({{1.5, 0}, {1, 0.5}}, std::vector<double>{1, 1}) == 0.0);
  CHECK(std::abs(hypervolume({{0.5, 0.5}, {0.6, 0.6}, {0.5, 0.5}}, std::vector<double>{1, 1}) - 0.25) <= 1e-12);
  CHECK(std::abs(hypervolume({{0, 0, 0}}, std::vector<double>{1, 2, 3}) - 6.0) <= 1e-12);
  CHECK_THROWS_AS(hypervolume({{0, 0, 0, 0}}, std::vector<double>{1, 1, 1, 1}), std::invalid_argument);
  CHECK_THROWS(hypervolume({{0, 0}}, std::vector<double>{1, 1, 1}));
}

TEST_CASE("ZDT4 analytic front hypervolume") {
  std::vector<std::vector<double>> front;
  const int n = 200000;
  for (int i = 0; i <= n; ++i) {
    const double t = static_cast<double>(i) / n;
    front.push_back({t, 1 - std::sqrt(t)});
  }
  const double hv = hypervolume(front, std::vector<double>{1, 500});
  CHECK(hv <= 499.0 + 2.0 / 3.0 + 1e-9);
  CHECK(hv == doctest::Approx(499.0 + 2.0 / 3.0).epsilon(1e-5));
}

TEST_CASE("hypervolume agrees with Monte Carlo on random fronts") {
  std::mt19937_64 rng(2025);
  for (int trial = 0; trial < 20; ++trial) {
    const auto pts = random_front(rng, 1 + rng() % 20);
    const std::vector<double> ref{1.1, 1.2};
    const double exact = hypervolume(pts, ref);
    const auto mc = oracles::hypervolume_mc(pts, {0, 0}, ref, 1000000, 1000 + static_cast<std::uint64_t>(trial));
    CHECK(std::abs(exact - mc.estimate) <= 3 * mc.standard_error);
  }
}

TEST_CASE("three-objective hypervolume agrees with Monte Carlo") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<std::vector<double>> pts(15);
    for (auto& p : pts) {
      const double a = u(rng), b = u(rng);
      p = {a, b, std::max(0.0, 1.5 - a - b)};
    }
    const std::vector<double> ref{1, 1, 1.5};
    const double exact = hypervolume(pts, ref);
    const auto mc = oracles::hypervolume_mc(pts, {0, 0, 0}, ref, 1000000, 99 + static_cast<std::uint64_t>(trial));
    CHECK(std::abs(exact - mc.estimate) <= 3 * mc.standard_error + 1e-12);
  }
}

TEST_CASE("archive monotonicity and brute-force equivalence") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0, 1.2);
  ParetoArchive archive({1, 1});
  std::vector<std::vector<double>> seen;
  double last = 0;
  for (std::size_t i = 0; i < 300; ++i) {
    std::vector<double> p{u(rng), u(rng)};
    const double before = archive.hypervolume();
    bool dominated = false;
    for (const auto& e : archive.entries()) dominated = dominated || oracles::dominates(e.objectives, p);
    archive.insert(i, p);
    if (dominated) CHECK(std::abs(archive.hypervolume() - before) <= 1e-12);
    CHECK(archive.hypervolume() >= last - 1e-12);
    last = archive.hypervolume();
    seen.push_back(p);
    const auto keep = brute_filter(seen);
    std::vector<std::size_t> ids;
    for (const auto& e : archive.entries()) ids.push_back(e.record);
    std::sort(ids.begin(), ids.end());
    CHECK(ids == keep);
    CHECK(std::abs(archive.hypervolume() - hypervolume(seen, std::vector<double>{1, 1})) <= 1e-12);
  }
}

}  // TEST_SUITE
