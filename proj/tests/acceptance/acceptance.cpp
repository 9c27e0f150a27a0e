#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "mobons/bench.hpp"
#include "mobons/config.hpp"
#include "mobons/gp.hpp"
#include "mobons/metrics.hpp"
#include "mobons/mobons.hpp"
#include "mobons/nsga2.hpp"
#include "mobons/problems.hpp"
#include "mobons/rng.hpp"
#include "mobons/run_io.hpp"
#include "mobons/sampler.hpp"
#include "mobons/sobol.hpp"
#include "oracles.hpp"

using namespace mobons;
namespace fs = std::filesystem;

namespace {

/// Collects the first few failed checks of one criterion.
class Checks {
 public:
  void expect(bool ok, const std::string& what) {
    if (ok) return;
    ++failures_;
    if (messages_.size() < 5) messages_.push_back(what);
  }
  void note(const std::string& s) { notes_.push_back(s); }
  bool ok() const { return failures_ == 0; }
  std::string detail() const {
    std::string s;
    for (const auto& n : notes_) s += (s.empty() ? "" : "; ") + n;
    for (const auto& m : messages_) s += (s.empty() ? "" : "; ") + std::string("failed: ") + m;
    if (failures_ > messages_.size()) s += "; (" + std::to_string(failures_ - messages_.size()) + " more)";
    return s;
  }

 private:
  std::size_t failures_ = 0;
  std::vector<std::string> messages_;
  std::vector<std::string> notes_;
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

fs::path config_path(const std::string& name) { return fs::path(MOBONS_SOURCE_DIR) / "configs" / name; }

fs::path out_dir(const std::string& name) {
  auto dir = fs::current_path() / "acceptance_out" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

// ---------------------------------------------------------------------------

void zdt4_reproduction(Checks& c) {
  auto cfg = load_config(config_path("zdt4.yaml"));
  const auto problem = resolve_problem(cfg);
  cfg.bench.replicates = 5;
  cfg.bench.algorithms = {Algorithm::Mobons, Algorithm::Qpots, Algorithm::Random};
  cfg.bench.workers = std::max(1u, std::thread::hardware_concurrency());
  const auto report = bench(problem, cfg, out_dir("zdt4_bench"));
  const double max_hv = 499.0 + 2.0 / 3.0;

  const auto* m = report.summary(Algorithm::Mobons);
  const auto* q = report.summary(Algorithm::Qpots);
  const auto* r = report.summary(Algorithm::Random);
  c.expect(m && q && r, "all three algorithms summarized");
  if (!(m && q && r)) return;
  c.expect(m->completed == 5 && q->completed == 5 && r->completed == 5, "15 completed runs");
  c.expect(report.consistent_initial_designs, "identical initial designs per replicate");
  c.note("median final HV mobons " + fmt(m->median_final) + ", qpots " + fmt(q->median_final) + ", random " +
         fmt(r->median_final));
  c.expect(m->median_final >= 0.95 * max_hv, "(a) mobons median >= 0.95 x 499.667 = " + fmt(0.95 * max_hv));
  c.expect(m->median_final > q->median_final, "(b) mobons median > qpots median");
  c.expect(m->median_final > r->median_final, "(b) mobons median > random median");
  c.expect(m->median_curve.size() == 101, "trajectory length N - n + 1 = 101");
  if (m->median_curve.size() > 60) {
    c.note("mobons median HV at iteration 60 " + fmt(m->median_curve[60]));
    c.expect(m->median_curve[60] > r->median_final, "(c) mobons median at iteration 60 > random final median");
  }
}

// ---------------------------------------------------------------------------

void gp_correctness(Checks& c) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0, 1);

  // Interpolation and the prior-variance bound on a fitted model.
  NodeDataset data(2);
  for (int i = 0; i < 20; ++i) {
    std::vector<double> z{u(rng), u(rng)};
    data.add(z, std::sin(5 * z[0]) * std::cos(2 * z[1]) + z[1]);
  }
  const auto gp = fit_gp(data, {{0, 1}, {0, 1}}, GpFitOptions{});
  double worst_interp = 0;
  for (std::size_t i = 0; i < data.size(); ++i)
    worst_interp = std::max(worst_interp, std::abs(gp.mean(data.inputs()[i]) - data.outputs()[i]));
  c.expect(worst_interp <= 1e-6, "interpolation error " + fmt(worst_interp));
  double worst_excess = -1e300;
  for (int t = 0; t < 1000; ++t) {
    std::vector<double> z{u(rng) * 1.2 - 0.1, u(rng) * 1.2 - 0.1};
    worst_excess = std::max(worst_excess, gp.variance(z) - gp.prior_variance());
  }
  c.expect(worst_excess <= 1e-9, "variance exceeds prior by " + fmt(worst_excess));

  // Extended-precision dense oracle for n <= 5, both kernel families.
  double worst_dense = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const int family = trial % 2;
    const std::size_t n = 1 + static_cast<std::size_t>(trial % 5);
    NodeDataset d(2);
    std::vector<std::vector<oracles::Real>> xs;
    std::vector<oracles::Real> ys;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> z{u(rng), u(rng)};
      const double y = std::exp(z[0]) - 2 * z[1];
      d.add(z, y);
      xs.push_back({z[0], z[1]});
      ys.push_back(y);
    }
    KernelSpec k;
    k.family = family ? KernelFamily::Matern52 : KernelFamily::RBF;
    k.lengthscales = Eigen::Vector2d(0.3 + u(rng), 0.3 + u(rng));
    k.signal_variance = 0.5 + u(rng);
    k.jitter = 1e-8;
    const double mean = u(rng) - 0.5;
    Standardization st{Eigen::VectorXd::Zero(2), Eigen::VectorXd::Ones(2), 0.0, 1.0};
    PosteriorGP post(d, {{0, 1}, {0, 1}}, st, k, mean);
    for (int t = 0; t < 10; ++t) {
      std::vector<double> z{u(rng), u(rng)};
      const auto ref = oracles::dense_posterior(family, k.signal_variance, {k.lengthscales[0], k.lengthscales[1]},
                                                1e-8L, mean, xs, ys, {z[0], z[1]});
      auto [pm, pv] = post.predict(z);
      worst_dense = std::max({worst_dense, std::abs(pm - static_cast<double>(ref.mean)),
                              std::abs(pv - std::max(0.0, static_cast<double>(ref.variance)))});
    }
  }
  c.note("max dense-oracle deviation " + fmt(worst_dense));
  c.expect(worst_dense <= 1e-10, "dense oracle deviation " + fmt(worst_dense));
}

// ---------------------------------------------------------------------------

void path_fidelity(Checks& c) {
  NodeDataset data(1);
  for (double z : {0.05, 0.3, 0.5, 0.72, 0.95}) data.add(std::vector<double>{z}, std::sin(6 * z) + 0.5 * z);
  const auto gp = fit_gp(data, {{0, 1}}, GpFitOptions{});
  const NodeModel model = gp;
  std::vector<double> zs;
  for (int i = 0; i < 10; ++i) zs.push_back(0.035 + 0.1 * i);
  std::vector<double> s1(10, 0.0), s2(10, 0.0);
  const int paths = 1000;
  for (int s = 0; s < paths; ++s) {
    const auto path = draw_path(model, 2048, mix_seed(2024, static_cast<std::uint64_t>(s)));
    for (std::size_t i = 0; i < 10; ++i) {
      const double v = path(std::vector<double>{zs[i]});
      s1[i] += v;
      s2[i] += v * v;
    }
  }
  double worst_z = 0, worst_rel = 0;
  for (std::size_t i = 0; i < 10; ++i) {
    auto [mu, var] = gp.predict(std::vector<double>{zs[i]});
    const double m = s1[i] / paths;
    const double v = (s2[i] - paths * m * m) / (paths - 1);
    const double zscore = std::abs(m - mu) / std::sqrt(var / paths);
    worst_z = std::max(worst_z, zscore);
    worst_rel = std::max(worst_rel, std::abs(v - var) / var);
    c.expect(zscore <= 3.0, "mean at z=" + fmt(zs[i]) + " off by " + fmt(zscore) + " standard errors");
    c.expect(std::abs(v - var) <= 0.15 * var, "variance at z=" + fmt(zs[i]) + " off by " + fmt(100 * std::abs(v - var) / var) + "%");
  }
  c.note("worst mean deviation " + fmt(worst_z) + " SE, worst variance error " + fmt(100 * worst_rel) + "%");
}

// ---------------------------------------------------------------------------

void nsga2_checks(Checks& c) {
  std::mt19937_64 rng(123);
  std::size_t mismatches = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng() % 200;
    const std::size_t m = 2 + rng() % 2;
    std::vector<std::vector<double>> pts(n, std::vector<double>(m));
    for (auto& p : pts)
      for (auto& v : p) v = static_cast<double>(rng() % 15) + (trial % 2 ? std::ldexp(static_cast<double>(rng() % 1024), -10) : 0.0);
    auto got = nondominated_sort(pts);
    auto want = oracles::peel_fronts(pts);
    for (auto& f : got) std::sort(f.begin(), f.end());
    for (auto& f : want) std::sort(f.begin(), f.end());
    if (got != want) ++mismatches;
  }
  c.expect(mismatches == 0, std::to_string(mismatches) + " sorting mismatches");

  NsgaConfig cfg;
  cfg.population_size = 60;
  cfg.generations = 100;
  cfg.seed = 7;
  auto problem = [](std::span<const double> g) {
    return Evaluation{{g[0] * g[0], (g[0] - 2) * (g[0] - 2)}, 0.0};
  };
  const auto res = evolve(problem, std::vector<Interval>{{-5, 5}}, cfg);
  std::vector<std::vector<double>> front, analytic;
  for (const auto& ind : res.front) front.push_back(ind.objectives);
  for (int i = 0; i <= 4000; ++i) {
    const double t = 2.0 * i / 4000;
    analytic.push_back({t * t, (t - 2) * (t - 2)});
  }
  const double h = front.empty() ? 1e300 : oracles::hausdorff(front, analytic);
  c.note("Hausdorff " + fmt(h) + " over " + std::to_string(front.size()) + " points");
  c.expect(h <= 0.1, "Hausdorff distance " + fmt(h));
}

// ---------------------------------------------------------------------------

void hypervolume_checks(Checks& c) {
  const double a = hypervolume({{0, 0}}, std::vector<double>{1, 1});
  const double b = hypervolume({{0.25, 0.75}, {0.75, 0.25}}, std::vector<double>{1, 1});
  c.expect(std::abs(a - 1.0) <= 1e-12, "single point " + fmt(a));
  c.expect(std::abs(b - 0.3125) <= 1e-12, "two points " + fmt(b));
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0, 1);
  double worst = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 1 + rng() % 20;
    std::vector<std::vector<double>> pts(n);
    for (auto& p : pts) {
      const double t = u(rng);
      p = {t, 1 - std::pow(t, 0.25 + 2 * u(rng))};
    }
    const std::vector<double> ref{1.1, 1.1};
    const double exact = hypervolume(pts, ref);
    const auto mc = oracles::hypervolume_mc(pts, {0, 0}, ref, 1000000, 7000 + static_cast<std::uint64_t>(trial));
    const double z = std::abs(exact - mc.estimate) / mc.standard_error;
    worst = std::max(worst, z);
    c.expect(z <= 3.0, "front " + std::to_string(trial) + " differs by " + fmt(z) + " SE");
  }
  c.note("worst Monte Carlo deviation " + fmt(worst) + " SE");
}

// ---------------------------------------------------------------------------

void cyclic_machinery(Checks& c) {
  const auto toy = build_cyclic_toy();
  const FixedPointOptions fp{1.0, 1e-12, 500};
  const auto s = solve_fixed_point(toy.network, toy.evaluators, std::vector<double>{0.3}, fp);
  c.expect(s.converged, "fixed point converged");
  const double err = std::max({std::abs(s.outputs[0] - 0.4), std::abs(s.outputs[1] - 0.2), std::abs(s.outputs[2] - 0.36)});
  c.note("fixed-point error " + fmt(err));
  c.expect(err <= 1e-8, "fixed point error " + fmt(err));

  auto cfg = load_config(config_path("cyclic.yaml"));
  const auto problem = resolve_problem(cfg);
  c.expect(cfg.run.init_budget == 10 && cfg.run.total_budget == 40, "cyclic config uses n=10, N=40");
  const auto result = run(problem.network, problem.evaluators, cfg.run);
  c.expect(result.records.size() == 40, "40 evaluations");
  c.expect(!result.archive.entries().empty(), "nonempty archive");
  double worst_res = 0, worst_curve = 0;
  for (const auto& e : result.archive.entries()) {
    const auto& rec = result.records[e.record];
    const double res = network_residual(problem.network, problem.evaluators, rec.design, rec.outputs);
    worst_res = std::max(worst_res, res);
    const auto& g = rec.objectives;
    worst_curve = std::max(worst_curve, std::abs(g[1] - (g[0] - 1) * (g[0] - 1)));
  }
  c.note(std::to_string(result.archive.size()) + " archive points, worst residual " + fmt(worst_res) +
         ", worst curve distance " + fmt(worst_curve));
  c.expect(worst_res <= 1e-6, "archive residual " + fmt(worst_res));
  c.expect(worst_curve <= 0.05, "archive curve distance " + fmt(worst_curve));
}

// ---------------------------------------------------------------------------

void constraint_check(Checks& c) {
  auto cfg = load_config(config_path("constrained.yaml"));
  const auto problem = resolve_problem(cfg);
  const auto result = run(problem.network, problem.evaluators, cfg.run);
  c.expect(result.records.size() == cfg.run.total_budget, "full budget consumed");
  c.expect(!result.archive.entries().empty(), "nonempty archive");
  double worst = -1e300;
  std::size_t infeasible_seen = 0;
  for (const auto& rec : result.records)
    if (!rec.feasible) ++infeasible_seen;
  for (const auto& e : result.archive.entries()) worst = std::max(worst, result.records[e.record].outputs[0]);
  c.note(std::to_string(result.archive.size()) + " archive points, max y0 " + fmt(worst) + ", " +
         std::to_string(infeasible_seen) + " infeasible evaluations kept out");
  c.expect(worst <= 0.8 + 1e-6, "archive y0 max " + fmt(worst));
}

// ---------------------------------------------------------------------------

void batch_mode(Checks& c) {
  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> u(0, 1);
  std::size_t mismatches = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t nc = 5 + rng() % 60, nh = rng() % 20, d = 1 + rng() % 5;
    std::vector<std::vector<double>> cands(nc, std::vector<double>(d)), hist(nh, std::vector<double>(d));
    for (auto& x : cands)
      for (auto& v : x) v = u(rng);
    for (auto& x : hist)
      for (auto& v : x) v = u(rng);
    if (greedy_maximin(cands, hist, 4).picks != oracles::greedy_maximin(cands, hist, 4)) ++mismatches;
  }
  c.expect(mismatches == 0, std::to_string(mismatches) + " greedy maximin mismatches");

  auto cfg = load_config(config_path("cyclic.yaml"));
  const auto problem = resolve_problem(cfg);
  cfg.run.batch_size = 4;
  const auto result = run(problem.network, problem.evaluators, cfg.run);
  const std::size_t n = cfg.run.init_budget, total = cfg.run.total_budget;
  const std::size_t rounds = (total - n + 3) / 4;
  c.note(std::to_string(result.records.size()) + " evaluations in " + std::to_string(result.acquisition_rounds) +
         " rounds of q=4");
  c.expect(result.records.size() == total, "record count equals budget");
  c.expect(result.acquisition_rounds == rounds, "acquisition rounds");
  for (const auto& m : result.models)
    if (const auto* gp = std::get_if<PosteriorGP>(&m)) c.expect(gp->size() == total, "node dataset size equals N");
}

// ---------------------------------------------------------------------------

void sobol_checks(Checks& c) {
  const std::vector<Interval> box{{0, 1}, {0, 1}, {0, 1}};
  VectorResponse linear = [](std::span<const double> x) -> std::optional<std::vector<double>> {
    return std::vector<double>{3 * x[0] + 4 * x[1], std::exp(x[0])};
  };
  const auto r = saltelli_first_order(linear, box, 8192, 31);
  c.note("linear S = (" + fmt(r.indices[0][0]) + ", " + fmt(r.indices[0][1]) + ", " + fmt(r.indices[0][2]) +
         "), single-variable S1 = " + fmt(r.indices[1][0]));
  c.expect(std::abs(r.indices[0][0] - 0.36) <= 0.03, "S1 linear");
  c.expect(std::abs(r.indices[0][1] - 0.64) <= 0.03, "S2 linear");
  c.expect(std::abs(r.indices[0][2]) <= 0.03, "S3 linear");
  c.expect(std::abs(r.indices[1][0] - 1.0) <= 0.03, "single-variable S1");
  c.expect(std::abs(r.indices[1][1]) <= 0.03 && std::abs(r.indices[1][2]) <= 0.03, "single-variable others");
  const LocalSobolOptions defaults;
  c.expect(defaults.extra_evals == 24, "default extra evaluations 24");
  c.expect(defaults.relative_box == 0.05, "default relative box 0.05");
  const AppConfig app;
  c.expect(app.sensitivity.extra_evals == 24 && app.sensitivity.relative_box == 0.05, "config defaults");
}

// ---------------------------------------------------------------------------

std::vector<std::string> log_without_time(const fs::path& path) {
  std::ifstream in(path);
  std::vector<std::string> rows;
  std::string line;
  while (std::getline(in, line)) rows.push_back(line.substr(0, line.rfind(',')));
  return rows;
}

void determinism(Checks& c) {
  const auto dir = out_dir("determinism");
  std::size_t compared = 0;
  for (const auto* name : {"cyclic.yaml", "constrained.yaml", "zdt4.yaml"}) {
    for (auto algo : {Algorithm::Mobons, Algorithm::Qpots, Algorithm::Random}) {
      auto cfg = load_config(config_path(name));
      const auto problem = resolve_problem(cfg);
      cfg.run.algorithm = algo;
      cfg.run.seed = 11;
      if (cfg.run.problem == "zdt4") {
        cfg.run.total_budget = cfg.run.init_budget + 5;
        cfg.run.nsga.generations = 30;
      }
      std::vector<fs::path> logs;
      for (int rep = 0; rep < 2; ++rep) {
        logs.push_back(dir / (cfg.run.problem + "_" + to_string(algo) + "_" + std::to_string(rep) + ".csv"));
        LogWriter log(logs.back(), problem.network);
        run_algorithm(problem.network, problem.evaluators, cfg.run, log.observer());
      }
      const auto a = log_without_time(logs[0]), b = log_without_time(logs[1]);
      c.expect(a.size() == cfg.run.total_budget + 1, cfg.run.problem + "/" + to_string(algo) + " log length");
      c.expect(a == b, cfg.run.problem + "/" + to_string(algo) + " logs differ");
      ++compared;
    }
  }
  c.note(std::to_string(compared) + " run pairs compared byte-for-byte excluding wall_time");
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<void(Checks&)> body;
  };
  const std::vector<Criterion> criteria{
      {1, "ZDT4 desk-scale reproduction", zdt4_reproduction},
      {2, "GP correctness", gp_correctness},
      {3, "pathwise Thompson sampling fidelity", path_fidelity},
      {4, "NSGA-II sorting and convergence", nsga2_checks},
      {5, "hypervolume", hypervolume_checks},
      {6, "cyclic machinery", cyclic_machinery},
      {7, "constraints", constraint_check},
      {8, "batch mode", batch_mode},
      {9, "Sobol sensitivity", sobol_checks},
      {10, "determinism", determinism},
  };
  // Cheap criteria first; the replicate study runs last.
  std::vector<std::size_t> order{1, 2, 3, 4, 5, 6, 7, 8, 9, 0};
  std::vector<std::string> lines(criteria.size());
  int failed = 0;
  for (auto i : order) {
    const auto& cr = criteria[i];
    Checks checks;
    const auto start = std::chrono::steady_clock::now();
    try {
      cr.body(checks);
    } catch (const std::exception& e) {
      checks.expect(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    char head[128];
    std::snprintf(head, sizeof head, "criterion %d: %s - %s [%.1fs]", cr.id, checks.ok() ? "PASS" : "FAIL", cr.name,
                  secs);
    lines[i] = std::string(head) + " (" + checks.detail() + ")";
    std::fprintf(stderr, "%s\n", lines[i].c_str());
    if (!checks.ok()) ++failed;
  }
  for (const auto& l : lines) std::printf("%s\n", l.c_str());
  return failed == 0 ? 0 : 1;
}
