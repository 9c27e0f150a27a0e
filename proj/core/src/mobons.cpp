#include "mobons/mobons.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <limits>
#include <stdexcept>

#include "mobons/lhs.hpp"
#include "mobons/rng.hpp"
#include "mobons/sampler.hpp"
#include "run_engine.hpp"

namespace mobons {

namespace {

// Candidates closer than this (standardized units) to an evaluated or
// already picked design are treated as duplicates.
constexpr double kMinSeparation = 1e-9;
// Objective and penalty value for subproblem points where the sampled
// network could not be evaluated.
constexpr double kFailureValue = 1e30;

double squared_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

double inequality_penalty(const FunctionNetwork& net, std::span<const double> y) {
  double p = 0.0;
  for (double h : net.project_constraints(y)) p += std::max(0.0, h);
  return p;
}

SubproblemMode resolve_mode(const FunctionNetwork& net, SubproblemMode mode) {
  if (mode != SubproblemMode::Auto) return mode;
  return net.is_acyclic() ? SubproblemMode::EliminateY : SubproblemMode::Joint;
}

double query_node(std::size_t k, const NodeFunction& f, std::span<const double> z) {
  double y;
  try {
    y = f(z);
  } catch (const NodeEvaluationError&) {
    throw;
  } catch (const std::exception& e) {
    throw NodeEvaluationError(k, e.what());
  }
  if (!std::isfinite(y)) throw NodeEvaluationError(k, "non-finite output");
  return y;
}

}  // namespace

std::string to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::Mobons: return "mobons";
    case Algorithm::Qpots: return "qpots";
    case Algorithm::Random: return "random";
  }
  return "unknown";
}

Algorithm algorithm_from_string(const std::string& name) {
  if (name == "mobons") return Algorithm::Mobons;
  if (name == "qpots") return Algorithm::Qpots;
  if (name == "random") return Algorithm::Random;
  throw std::invalid_argument("unknown algorithm '" + name + "' (expected mobons, qpots or random)");
}

std::string to_string(SubproblemMode mode) {
  switch (mode) {
    case SubproblemMode::Auto: return "auto";
    case SubproblemMode::EliminateY: return "eliminate";
    case SubproblemMode::Joint: return "joint";
  }
  return "unknown";
}

SubproblemMode subproblem_mode_from_string(const std::string& name) {
  if (name == "auto") return SubproblemMode::Auto;
  if (name == "eliminate") return SubproblemMode::EliminateY;
  if (name == "joint") return SubproblemMode::Joint;
  throw std::invalid_argument("unknown subproblem mode '" + name + "' (expected auto, eliminate or joint)");
}

void RunConfig::validate() const {
  if (init_budget < 2) throw std::invalid_argument("init_budget must be at least 2");
  if (total_budget < init_budget) throw std::invalid_argument("total_budget must be at least init_budget");
  if (batch_size < 1) throw std::invalid_argument("batch_size must be at least 1");
  if (num_features < 1) throw std::invalid_argument("num_features must be at least 1");
  if (gp.restarts < 0) throw std::invalid_argument("gp.restarts must be non-negative");
  if (gp.refit_interval < 1) throw std::invalid_argument("gp.refit_interval must be at least 1");
  if (!(feasibility_tolerance >= 0.0)) throw std::invalid_argument("feasibility_tolerance must be non-negative");
  nsga.validate();
  fixed_point.validate();
}

std::vector<std::vector<double>> initial_designs(const FunctionNetwork& net, std::size_t n, std::uint64_t seed) {
  Rng rng(mix_seed(seed, "init"));
  return latin_hypercube(n, net.design_box(), rng);
}

std::uint64_t hash_designs(const std::vector<std::vector<double>>& designs) {
  std::uint64_t h = 1469598103934665603ULL;
  auto feed = [&](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xffU;
      h *= 1099511628211ULL;
    }
  };
  feed(designs.size());
  for (const auto& x : designs) {
    feed(x.size());
    for (double v : x) {
      std::uint64_t bits;
      std::memcpy(&bits, &v, sizeof bits);
      feed(bits);
    }
  }
  return h;
}

std::vector<NodeDataset> initialize(const FunctionNetwork& net, std::span<const NodeFunction> evaluators,
                                    const std::vector<std::vector<double>>& designs, std::uint64_t seed) {
  const auto n = designs.size();
  std::vector<Interval> output_box;
  for (const auto& node : net.nodes()) output_box.push_back(node.output_box);
  Rng rng(mix_seed(seed, "init-outputs"));
  const auto outputs = latin_hypercube(n, output_box, rng);

  std::vector<NodeDataset> datasets;
  for (std::size_t k = 0; k < net.node_count(); ++k) {
    NodeDataset data(net.input_dim(k));
    for (std::size_t i = 0; i < n; ++i) {
      const auto z = net.assemble_node_input(k, designs[i], outputs[i]);
      data.add(z, query_node(k, evaluators[k], z));
    }
    datasets.push_back(std::move(data));
  }
  return datasets;
}

NetworkSurrogate::NetworkSurrogate(const FunctionNetwork& net, std::span<const NodeFunction> evaluators,
                                   std::vector<NodeDataset> datasets, GpSettings settings, std::uint64_t seed)
    : net_(&net), settings_(settings), datasets_(std::move(datasets)), fitted_size_(net.node_count(), 0) {
  if (datasets_.size() != net.node_count()) throw std::invalid_argument("one dataset per node is required");
  if (evaluators.size() != net.node_count()) throw std::invalid_argument("one evaluator per node is required");
  models_.reserve(net.node_count());
  for (std::size_t k = 0; k < net.node_count(); ++k) {
    if (net.node(k).kind == NodeKind::WhiteBox) {
      models_.emplace_back(whitebox_surrogate(net.node(k), evaluators[k]));
    } else {
      models_.emplace_back(WhiteBoxModel(evaluators[k]));  // placeholder until fitted
      fit(k, seed);
    }
  }
}

void NetworkSurrogate::add(std::size_t node, std::span<const double> z, double y) { datasets_.at(node).add(z, y); }

void NetworkSurrogate::fit(std::size_t k, std::uint64_t seed) {
  GpFitOptions opts;
  opts.family = settings_.family;
  opts.restarts = settings_.restarts;
  opts.seed = mix_seed(seed, k);
  const auto* gp = std::get_if<PosteriorGP>(&models_[k]);
  GpHyperparameters warm;
  if (gp) warm = gp->hyperparameters();
  models_[k] = fit_gp(datasets_[k], net_->input_box(k), opts, gp ? &warm : nullptr);
  fitted_size_[k] = datasets_[k].size();
}

void NetworkSurrogate::update(std::uint64_t seed) {
  for (std::size_t k = 0; k < models_.size(); ++k) {
    const auto* gp = std::get_if<PosteriorGP>(&models_[k]);
    if (!gp) continue;
    const auto n = datasets_[k].size();
    if (n == gp->size()) continue;
    if (n <= settings_.refit_every_until || n - fitted_size_[k] >= settings_.refit_interval) {
      fit(k, seed);
    } else {
      models_[k] = gp->with_dataset(datasets_[k]);
    }
  }
}

AcquisitionProblem acquisition_problem(const FunctionNetwork& net, std::vector<NodeFunction> sampled,
                                       SubproblemMode mode, const FixedPointOptions& fixed_point) {
  mode = resolve_mode(net, mode);
  const auto d = net.design_dim();
  const auto m = net.objective_count();
  std::vector<Interval> bounds(net.design_box().begin(), net.design_box().end());
  auto failure = [m] { return Evaluation{std::vector<double>(m, kFailureValue), kFailureValue}; };

  MooProblem problem;
  if (mode == SubproblemMode::EliminateY) {
    problem = [&net, sampled, fixed_point, failure](std::span<const double> x) -> Evaluation {
      try {
        const auto state = evaluate_network(net, sampled, x, fixed_point);
        const double residual = state.converged ? 0.0 : state.residual;
        return {net.project_objectives(state.outputs), residual + inequality_penalty(net, state.outputs)};
      } catch (const NodeEvaluationError&) {
        return failure();
      }
    };
  } else {
    for (const auto& node : net.nodes()) bounds.push_back(node.output_box);
    problem = [&net, sampled, d, failure](std::span<const double> genome) -> Evaluation {
      const auto x = genome.first(d);
      const auto y = genome.subspan(d);
      const double residual = network_residual(net, sampled, x, y);
      if (!std::isfinite(residual)) return failure();
      return {net.project_objectives(y), residual + inequality_penalty(net, y)};
    };
  }
  return {std::move(problem), std::move(bounds), mode};
}

AcquiredPoint decode_acquired(const FunctionNetwork& net, const std::vector<NodeFunction>& sampled,
                              SubproblemMode mode, const FixedPointOptions& fixed_point, const Individual& ind) {
  mode = resolve_mode(net, mode);
  const auto d = net.design_dim();
  AcquiredPoint p;
  p.design.assign(ind.genome.begin(), ind.genome.begin() + static_cast<std::ptrdiff_t>(d));
  if (mode == SubproblemMode::Joint) {
    p.outputs.assign(ind.genome.begin() + static_cast<std::ptrdiff_t>(d), ind.genome.end());
  } else {
    try {
      p.outputs = evaluate_network(net, sampled, p.design, fixed_point).outputs;
    } catch (const NodeEvaluationError&) {
      p.outputs = net.output_midpoint();
    }
  }
  p.objectives = ind.objectives;
  p.penalty = ind.penalty;
  return p;
}

Acquisition acquire(const FunctionNetwork& net, std::span<const NodeModel> models, const RunConfig& config,
                    std::uint64_t seed) {
  auto sampled = sample_network(models, config.num_features, mix_seed(seed, "paths"));
  const auto ap = acquisition_problem(net, sampled, config.mode, config.fixed_point);
  NsgaConfig nsga = config.nsga;
  nsga.seed = mix_seed(seed, "nsga");
  const auto result = evolve(ap.problem, ap.bounds, nsga);

  Acquisition acq;
  acq.mode = ap.mode;
  acq.feasible = result.feasible;
  acq.front.reserve(result.front.size());
  for (const auto& ind : result.front)
    acq.front.push_back(decode_acquired(net, sampled, ap.mode, config.fixed_point, ind));
  return acq;
}

std::vector<double> standardize_design(std::span<const double> x, std::span<const Interval> box) {
  if (x.size() != box.size()) throw std::invalid_argument("design length does not match box");
  std::vector<double> u(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) u[i] = (x[i] - box[i].lower) / box[i].width();
  return u;
}

MaximinSelection greedy_maximin(const std::vector<std::vector<double>>& candidates,
                                const std::vector<std::vector<double>>& history, std::size_t q) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(candidates.size(), inf);
  for (std::size_t c = 0; c < candidates.size(); ++c)
    for (const auto& h : history) dist[c] = std::min(dist[c], squared_distance(candidates[c], h));

  MaximinSelection sel;
  std::vector<bool> taken(candidates.size(), false);
  const double floor = kMinSeparation * kMinSeparation;
  while (sel.picks.size() < q) {
    std::size_t best = candidates.size();
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      if (taken[c] || !(dist[c] > floor)) continue;
      if (best == candidates.size() || dist[c] > dist[best]) best = c;
    }
    if (best == candidates.size()) break;
    taken[best] = true;
    sel.picks.push_back(best);
    sel.distances.push_back(std::sqrt(dist[best]));
    for (std::size_t c = 0; c < candidates.size(); ++c)
      if (!taken[c]) dist[c] = std::min(dist[c], squared_distance(candidates[c], candidates[best]));
  }
  return sel;
}

std::vector<SelectedCandidate> select_candidates(const FunctionNetwork& net, const Acquisition& first,
                                                 const std::vector<std::vector<double>>& history, std::size_t q,
                                                 const RedrawFn& redraw, std::size_t max_redraws) {
  std::vector<std::vector<double>> hist;
  hist.reserve(history.size() + q);
  for (const auto& x : history) hist.push_back(standardize_design(x, net.design_box()));

  std::vector<SelectedCandidate> picked;
  Acquisition current;
  const Acquisition* acq = &first;
  for (std::size_t draw = 0;; ++draw) {
    std::vector<std::vector<double>> cands;
    cands.reserve(acq->front.size());
    for (const auto& p : acq->front) cands.push_back(standardize_design(p.design, net.design_box()));
    const auto sel = greedy_maximin(cands, hist, q - picked.size());
    for (std::size_t i = 0; i < sel.picks.size(); ++i) {
      picked.push_back({acq->front[sel.picks[i]], sel.distances[i], draw});
      hist.push_back(cands[sel.picks[i]]);
    }
    if (picked.size() >= q || draw >= max_redraws || !redraw) break;
    current = redraw(draw + 1);
    acq = &current;
  }
  return picked;
}

RunResult run(const FunctionNetwork& net, std::span<const NodeFunction> evaluators, const RunConfig& config,
              const RecordObserver& observer) {
  detail::RunEngine engine(net, evaluators, config, observer, Algorithm::Mobons);
  auto datasets = initialize(net, evaluators, engine.designs(), config.seed);
  engine.record_initial([&](std::size_t i, EvaluationRecord& r) {
    for (std::size_t k = 0; k < net.node_count(); ++k) {
      r.node_inputs.push_back(datasets[k].inputs()[i]);
      r.observed.push_back(datasets[k].outputs()[i]);
    }
  });

  NetworkSurrogate surrogate(net, evaluators, std::move(datasets), config.gp, mix_seed(config.seed, "fit"));
  auto& result = engine.result();

  while (engine.remaining() > 0) {
    const auto round = ++result.acquisition_rounds;
    const auto iter_seed = mix_seed(config.seed, {0x69746572ULL, round});
    const auto q = std::min(config.batch_size, engine.remaining());
    const auto& models = surrogate.models();

    const auto first = acquire(net, models, config, mix_seed(iter_seed, 0));
    const auto picked = select_candidates(
        net, first, engine.history(), q,
        [&](std::size_t r) {
          ++result.redraws;
          return acquire(net, models, config, mix_seed(iter_seed, r));
        },
        config.max_redraws);

    std::vector<AcquiredPoint> batch;
    for (const auto& c : picked) batch.push_back(c.point);

    if (batch.size() < q) {
      // Thompson draws kept landing on evaluated designs: fill the batch
      // with uniform designs wired through the posterior-mean network.
      Rng rng(mix_seed(iter_seed, "fallback"));
      const auto mean_net = mean_network(models);
      while (batch.size() < q) {
        AcquiredPoint p;
        p.design = uniform_point(net.design_box(), rng);
        try {
          p.outputs = evaluate_network(net, mean_net, p.design, config.fixed_point).outputs;
        } catch (const NodeEvaluationError&) {
          p.outputs = net.output_midpoint();
        }
        batch.push_back(std::move(p));
        ++result.random_fallbacks;
      }
    }

    for (const auto& p : batch) {
      EvaluationRecord r;
      r.iteration = round;
      r.design = p.design;
      bool consistent = true;
      for (std::size_t k = 0; k < net.node_count(); ++k) {
        auto z = net.assemble_node_input(k, p.design, p.outputs);
        const double y = query_node(k, evaluators[k], z);
        surrogate.add(k, z, y);
        r.node_inputs.push_back(std::move(z));
        r.observed.push_back(y);
      }
      for (std::size_t k = 0; k < net.node_count() && consistent; ++k)
        consistent = net.assemble_node_input(k, p.design, r.observed) == r.node_inputs[k];
      if (consistent) {
        NetworkState state;
        state.design = p.design;
        state.outputs = r.observed;
        state.converged = true;
        engine.commit(std::move(r), state);
      } else {
        engine.commit(std::move(r), engine.solve(p.design));
      }
    }
    surrogate.update(mix_seed(iter_seed, "fit"));
  }

  result.models = surrogate.models();
  return engine.finish();
}

RunResult run_algorithm(const FunctionNetwork& net, std::span<const NodeFunction> evaluators,
                        const RunConfig& config, const RecordObserver& observer) {
  if (config.algorithm == Algorithm::Mobons) return run(net, evaluators, config, observer);
  return run_baseline(config.algorithm, net, evaluators, config, observer);
}

}  // namespace mobons
