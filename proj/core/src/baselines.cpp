#include <algorithm>
#include <stdexcept>

#include "mobons/lhs.hpp"
#include "mobons/mobons.hpp"
#include "mobons/rng.hpp"
#include "run_engine.hpp"

namespace mobons {

namespace {

RunResult run_random(const FunctionNetwork& net, std::span<const NodeFunction> evaluators, const RunConfig& config,
                     const RecordObserver& observer) {
  detail::RunEngine engine(net, evaluators, config, observer, Algorithm::Random);
  engine.record_initial();
  auto& result = engine.result();
  Rng rng(mix_seed(config.seed, "random"));
  while (engine.remaining() > 0) {
    const auto round = ++result.acquisition_rounds;
    const auto q = std::min(config.batch_size, engine.remaining());
    for (std::size_t i = 0; i < q; ++i) {
      EvaluationRecord r;
      r.iteration = round;
      r.design = uniform_point(net.design_box(), rng);
      const auto state = engine.solve(r.design);
      engine.commit(std::move(r), state);
    }
  }
  return engine.finish();
}

/// One black-box node per objective, each reading every design variable.
FunctionNetwork objective_network(const FunctionNetwork& net, const std::vector<EvaluationRecord>& records) {
  const auto m = net.objective_count();
  std::vector<std::size_t> all(net.design_dim());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  std::vector<NodeSpec> nodes;
  for (std::size_t j = 0; j < m; ++j) {
    double lo = records.front().objectives[j], hi = lo;
    for (const auto& r : records) {
      lo = std::min(lo, r.objectives[j]);
      hi = std::max(hi, r.objectives[j]);
    }
    const double pad = std::max(1.0, hi - lo);
    nodes.push_back({"g" + std::to_string(j), NodeKind::BlackBox, all, {}, {lo - pad, hi + pad}});
  }
  return FunctionNetwork(std::vector<Interval>(net.design_box().begin(), net.design_box().end()), std::move(nodes),
                         Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m)));
}

RunResult run_qpots(const FunctionNetwork& net, std::span<const NodeFunction> evaluators, const RunConfig& config,
                    const RecordObserver& observer) {
  detail::RunEngine engine(net, evaluators, config, observer, Algorithm::Qpots);
  engine.record_initial();
  auto& result = engine.result();
  const auto m = net.objective_count();

  const auto proxy = objective_network(net, result.records);
  std::vector<NodeDataset> datasets(m, NodeDataset(net.design_dim()));
  for (const auto& r : result.records)
    for (std::size_t j = 0; j < m; ++j) datasets[j].add(r.design, r.objectives[j]);
  // The proxy nodes are all black-box, so these evaluators are never called.
  std::vector<NodeFunction> unused(m, [](std::span<const double>) -> double {
    throw std::logic_error("objective proxies are surrogate-only");
  });
  NetworkSurrogate surrogate(proxy, unused, std::move(datasets), config.gp, mix_seed(config.seed, "fit"));

  RunConfig sub = config;
  sub.mode = SubproblemMode::EliminateY;

  while (engine.remaining() > 0) {
    const auto round = ++result.acquisition_rounds;
    const auto iter_seed = mix_seed(config.seed, {0x69746572ULL, round});
    const auto q = std::min(config.batch_size, engine.remaining());
    const auto& models = surrogate.models();

    const auto first = acquire(proxy, models, sub, mix_seed(iter_seed, 0));
    const auto picked = select_candidates(
        proxy, first, engine.history(), q,
        [&](std::size_t r) {
          ++result.redraws;
          return acquire(proxy, models, sub, mix_seed(iter_seed, r));
        },
        config.max_redraws);

    std::vector<std::vector<double>> batch;
    for (const auto& c : picked) batch.push_back(c.point.design);
    Rng rng(mix_seed(iter_seed, "fallback"));
    while (batch.size() < q) {
      batch.push_back(uniform_point(net.design_box(), rng));
      ++result.random_fallbacks;
    }

    for (auto& x : batch) {
      EvaluationRecord r;
      r.iteration = round;
      r.design = x;
      const auto state = engine.solve(x);
      engine.commit(std::move(r), state);
      const auto& g = result.records.back().objectives;
      for (std::size_t j = 0; j < m; ++j) surrogate.add(j, x, g[j]);
    }
    surrogate.update(mix_seed(iter_seed, "fit"));
  }
  result.models = surrogate.models();
  return engine.finish();
}

}  // namespace

RunResult run_baseline(Algorithm algorithm, const FunctionNetwork& net, std::span<const NodeFunction> evaluators,
                       const RunConfig& config, const RecordObserver& observer) {
  switch (algorithm) {
    case Algorithm::Random: return run_random(net, evaluators, config, observer);
    case Algorithm::Qpots: return run_qpots(net, evaluators, config, observer);
    case Algorithm::Mobons: break;
  }
  throw std::invalid_argument("run_baseline accepts random or qpots");
}

}  // namespace mobons
