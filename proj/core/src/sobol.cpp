#include "mobons/sobol.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "mobons/lhs.hpp"
#include "mobons/rng.hpp"

namespace mobons {

SobolResult saltelli_first_order(const VectorResponse& response, std::span<const Interval> box,
                                 std::size_t samples, std::uint64_t seed, double max_failure_fraction) {
  const auto d = box.size();
  if (d == 0) throw std::invalid_argument("sobol: empty box");
  if (samples < 2) throw std::invalid_argument("sobol: need at least 2 samples");

  Rng rng(seed);
  std::vector<std::vector<double>> a(samples), b(samples);
  for (auto& row : a) row = uniform_point(box, rng);
  for (auto& row : b) row = uniform_point(box, rng);

  std::size_t failures = 0;
  const std::size_t total = samples * (d + 2);
  auto eval = [&](std::span<const double> x) {
    auto r = response(x);
    if (!r) ++failures;
    return r;
  };

  std::vector<std::optional<std::vector<double>>> fa(samples), fb(samples);
  std::vector<std::vector<std::optional<std::vector<double>>>> fab(d, std::vector<std::optional<std::vector<double>>>(samples));
  for (std::size_t j = 0; j < samples; ++j) {
    fa[j] = eval(a[j]);
    fb[j] = eval(b[j]);
    for (std::size_t i = 0; i < d; ++i) {
      auto x = a[j];
      x[i] = b[j][i];
      fab[i][j] = eval(x);
    }
  }
  if (static_cast<double>(failures) > max_failure_fraction * static_cast<double>(total)) {
    std::ostringstream msg;
    msg << "sensitivity analysis: " << failures << " of " << total
        << " evaluations failed to converge; try a smaller local box";
    throw std::runtime_error(msg.str());
  }

  std::vector<std::size_t> rows;
  for (std::size_t j = 0; j < samples; ++j) {
    bool ok = fa[j] && fb[j];
    for (std::size_t i = 0; i < d && ok; ++i) ok = fab[i][j].has_value();
    if (ok) rows.push_back(j);
  }
  if (rows.size() < 2) throw std::runtime_error("sensitivity analysis: too few successful samples");
  const auto m = fa[rows.front()]->size();
  const double n = static_cast<double>(rows.size());

  SobolResult result;
  result.variables = d;
  result.objectives = m;
  result.samples = rows.size();
  result.failures = failures;
  result.box.assign(box.begin(), box.end());
  result.indices.assign(m, std::vector<double>(d, 0.0));
  result.raw_indices = result.indices;
  result.standard_errors = result.indices;

  for (std::size_t o = 0; o < m; ++o) {
    double mean = 0.0;
    for (auto j : rows) mean += (*fa[j])[o] + (*fb[j])[o];
    mean /= 2.0 * n;
    double var = 0.0;
    for (auto j : rows) {
      var += ((*fa[j])[o] - mean) * ((*fa[j])[o] - mean);
      var += ((*fb[j])[o] - mean) * ((*fb[j])[o] - mean);
    }
    var /= 2.0 * n;
    for (std::size_t i = 0; i < d; ++i) {
      if (!(var > 0.0)) continue;
      double s = 0.0, s2 = 0.0;
      for (auto j : rows) {
        // Centering f_B keeps the estimator's variance independent of the response offset.
        const double t = ((*fb[j])[o] - mean) * ((*fab[i][j])[o] - (*fa[j])[o]);
        s += t;
        s2 += t * t;
      }
      const double tm = s / n;
      const double tvar = std::max(0.0, s2 / n - tm * tm);
      result.raw_indices[o][i] = tm / var;
      result.indices[o][i] = std::clamp(tm / var, 0.0, 1.0);
      result.standard_errors[o][i] = std::sqrt(tvar / n) / var;
    }
  }
  return result;
}

std::vector<Interval> local_box(std::span<const Interval> design_box, std::span<const double> center,
                                double relative) {
  if (center.size() != design_box.size()) throw std::invalid_argument("local_box: center dimension mismatch");
  if (!(relative > 0.0)) throw std::invalid_argument("local_box: relative half-width must be > 0");
  std::vector<Interval> box(design_box.size());
  for (std::size_t i = 0; i < box.size(); ++i) {
    const auto& b = design_box[i];
    if (center[i] < b.lower || center[i] > b.upper)
      throw std::invalid_argument("local_box: center lies outside the design box");
    const double h = relative * b.width();
    box[i] = {std::max(b.lower, center[i] - h), std::min(b.upper, center[i] + h)};
  }
  return box;
}

SobolResult local_sobol(const FunctionNetwork& net, std::vector<NodeModel>& models,
                        std::span<const NodeFunction> true_evaluators, std::span<const double> center,
                        const LocalSobolOptions& options) {
  if (models.size() != net.node_count()) throw std::invalid_argument("local_sobol: need one model per node");
  const auto box = local_box(net.design_box(), center, options.relative_box);

  if (options.extra_evals > 0) {
    Rng rng(mix_seed(options.seed, "local-refine"));
    const auto designs = latin_hypercube(options.extra_evals, box, rng);
    std::vector<NetworkState> states;
    for (const auto& x : designs) states.push_back(evaluate_network(net, true_evaluators, x, options.fixed_point));
    for (std::size_t k = 0; k < net.node_count(); ++k) {
      auto* gp = std::get_if<PosteriorGP>(&models[k]);
      if (!gp) continue;
      NodeDataset data = gp->dataset();
      for (const auto& s : states) {
        if (!s.converged) continue;
        data.add(net.assemble_node_input(k, s.design, s.outputs), s.outputs[k]);
      }
      auto opts = options.fit;
      opts.family = gp->kernel().family;
      opts.seed = mix_seed(options.seed, k);
      const auto warm = gp->hyperparameters();
      models[k] = fit_gp(std::move(data), gp->input_box(), opts, &warm);
    }
  }

  const auto means = mean_network(models);
  VectorResponse response = [&](std::span<const double> x) -> std::optional<std::vector<double>> {
    try {
      const auto s = evaluate_network(net, means, x, options.fixed_point);
      if (!s.converged) return std::nullopt;
      return net.project_objectives(s.outputs);
    } catch (const NodeEvaluationError&) {
      return std::nullopt;
    }
  };
  return saltelli_first_order(response, box, options.samples, mix_seed(options.seed, "saltelli"));
}

void write_sobol_csv(std::ostream& os, const SobolResult& result) {
  os << "variable,objective,index,standard_error\n";
  const auto old = os.precision(17);
  for (std::size_t o = 0; o < result.objectives; ++o)
    for (std::size_t i = 0; i < result.variables; ++i)
      os << "x" << i << ",g" << o << ',' << result.indices[o][i] << ',' << result.standard_errors[o][i] << '\n';
  os.precision(old);
}

}  // namespace mobons
