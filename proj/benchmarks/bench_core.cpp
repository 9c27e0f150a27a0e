#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

#include "mobons/gp.hpp"
#include "mobons/lhs.hpp"
#include "mobons/metrics.hpp"
#include "mobons/mobons.hpp"
#include "mobons/nsga2.hpp"
#include "mobons/problems.hpp"
#include "mobons/rng.hpp"
#include "mobons/sampler.hpp"

using namespace mobons;

namespace {

std::vector<std::vector<double>> random_points(std::size_t n, std::size_t m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<std::vector<double>> pts(n, std::vector<double>(m));
  for (auto& p : pts)
    for (auto& v : p) v = u(rng);
  return pts;
}

/// Points on a convex curve, so every one of them is nondominated.
std::vector<std::vector<double>> front_points(std::size_t n, std::size_t m) {
  std::vector<std::vector<double>> pts(n, std::vector<double>(m));
  for (std::size_t i = 0; i < n; ++i) {
    const double t = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
    pts[i][0] = t;
    pts[i][1] = (1 - std::sqrt(t)) * (1 - std::sqrt(t));
    for (std::size_t j = 2; j < m; ++j) pts[i][j] = std::fmod(0.37 * static_cast<double>(i * j), 1.0);
  }
  return pts;
}

NodeDataset sine_dataset(std::size_t n, std::size_t d, std::uint64_t seed) {
  NodeDataset data(d);
  for (const auto& z : random_points(n, d, seed)) {
    double y = 0;
    for (std::size_t i = 0; i < d; ++i) y += std::sin(3 * z[i] + static_cast<double>(i));
    data.add(z, y);
  }
  return data;
}

void BM_NondominatedSort(benchmark::State& state) {
  const auto pts = random_points(static_cast<std::size_t>(state.range(0)), 2, 1);
  for (auto _ : state) benchmark::DoNotOptimize(nondominated_sort(pts));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_NondominatedSort)->RangeMultiplier(2)->Range(50, 400)->Complexity();

void BM_Hypervolume2D(benchmark::State& state) {
  const auto pts = front_points(static_cast<std::size_t>(state.range(0)), 2);
  const std::vector<double> ref{1.1, 1.1};
  for (auto _ : state) benchmark::DoNotOptimize(hypervolume(pts, ref));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Hypervolume2D)->RangeMultiplier(4)->Range(16, 1024)->Complexity();

void BM_Hypervolume3D(benchmark::State& state) {
  const auto pts = random_points(static_cast<std::size_t>(state.range(0)), 3, 2);
  const std::vector<double> ref{1.1, 1.1, 1.1};
  for (auto _ : state) benchmark::DoNotOptimize(hypervolume(pts, ref));
}
BENCHMARK(BM_Hypervolume3D)->Arg(32)->Arg(128);

void BM_GpFit(benchmark::State& state) {
  const auto data = sine_dataset(static_cast<std::size_t>(state.range(0)), 2, 3);
  GpFitOptions opts;
  opts.restarts = 3;
  for (auto _ : state) benchmark::DoNotOptimize(fit_gp(data, {{0, 1}, {0, 1}}, opts));
}
BENCHMARK(BM_GpFit)->Arg(20)->Arg(60)->Arg(120)->Unit(benchmark::kMillisecond);

void BM_GpPredict(benchmark::State& state) {
  const auto gp = fit_gp(sine_dataset(static_cast<std::size_t>(state.range(0)), 2, 4), {{0, 1}, {0, 1}}, {});
  const std::vector<double> z{0.31, 0.62};
  for (auto _ : state) benchmark::DoNotOptimize(gp.predict(z));
}
BENCHMARK(BM_GpPredict)->Arg(20)->Arg(120);

void BM_PathEvaluation(benchmark::State& state) {
  const NodeModel model = fit_gp(sine_dataset(60, 2, 5), {{0, 1}, {0, 1}}, {});
  const auto path = draw_path(model, static_cast<std::size_t>(state.range(0)), 6);
  std::vector<double> z{0.31, 0.62};
  for (auto _ : state) {
    z[0] = std::fmod(z[0] + 0.137, 1.0);
    benchmark::DoNotOptimize(path(z));
  }
}
BENCHMARK(BM_PathEvaluation)->Arg(256)->Arg(1024)->Arg(4096);

void BM_PathDraw(benchmark::State& state) {
  const NodeModel model = fit_gp(sine_dataset(static_cast<std::size_t>(state.range(0)), 2, 7), {{0, 1}, {0, 1}}, {});
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(draw_path(model, 1024, ++seed));
}
BENCHMARK(BM_PathDraw)->Arg(20)->Arg(120);

/// Sampled-network forward pass on ZDT4, the inner loop of the acquisition.
void BM_Zdt4SampledNetwork(benchmark::State& state) {
  const auto problem = build_zdt4_network();
  const auto& net = problem.network;
  const auto designs = initial_designs(net, 21, 1);
  NetworkSurrogate surrogate(net, problem.evaluators, initialize(net, problem.evaluators, designs, 1), GpSettings{}, 1);
  const auto sampled = sample_network(surrogate.models(), 1024, 2);
  Rng rng(3);
  const auto x = uniform_point(net.design_box(), rng);
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_acyclic(net, sampled, x));
}
BENCHMARK(BM_Zdt4SampledNetwork);

}  // namespace

BENCHMARK_MAIN();
