#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mobons/bench.hpp"
#include "mobons/config.hpp"
#include "mobons/errors.hpp"
#include "mobons/metrics.hpp"
#include "mobons/node_model.hpp"
#include "mobons/rng.hpp"
#include "mobons/run_io.hpp"
#include "mobons/sobol.hpp"

namespace fs = std::filesystem;
using namespace mobons;

namespace {

constexpr int kUsageError = 1;
constexpr int kRuntimeError = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<double> parse_reals(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(cell, &used));
      if (used != cell.size()) throw std::invalid_argument(cell);
    } catch (const std::exception&) {
      throw UsageError("'" + text + "' is not a comma-separated list of numbers");
    }
  }
  if (out.empty()) throw UsageError("empty number list");
  return out;
}

std::vector<Algorithm> parse_algorithms(const std::string& text) {
  std::vector<Algorithm> out;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      out.push_back(algorithm_from_string(cell));
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  if (out.empty()) throw UsageError("--algo needs at least one algorithm");
  return out;
}

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out = "results";
  std::string algo;
  bool quiet = false;
};

AppConfig load(const Common& c) {
  auto cfg = load_config(c.config);
  if (c.seed) cfg.run.seed = *c.seed;
  return cfg;
}

int cmd_run(const Common& c) {
  auto cfg = load(c);
  if (!c.algo.empty()) {
    const auto algos = parse_algorithms(c.algo);
    if (algos.size() != 1) throw UsageError("run takes a single --algo");
    cfg.run.algorithm = algos.front();
  }
  const auto problem = resolve_problem(cfg);
  fs::create_directories(c.out);
  LogWriter log(fs::path(c.out) / "log.csv", problem.network);
  const bool quiet = c.quiet;
  const auto init = cfg.run.init_budget;
  auto observer = [&](const EvaluationRecord& r, double hv) {
    log(r, hv);
    if (!quiet && !r.initial)
      std::printf("iter %4zu  eval %4zu  hv %.6f%s\n", r.iteration, r.index + 1 - init, hv,
                  r.feasible ? "" : "  (infeasible)");
  };
  const auto result = run_algorithm(problem.network, problem.evaluators, cfg.run, observer);
  write_summary(fs::path(c.out) / "summary.json", result, cfg, problem.network);
  if (!result.models.empty()) save_models(fs::path(c.out) / "models.json", result.models);
  std::printf("%s on %s: final hypervolume %.17g, archive size %zu\n", to_string(cfg.run.algorithm).c_str(),
              problem.id.c_str(), result.hypervolume.back(), result.archive.size());
  return 0;
}

int cmd_bench(const Common& c, std::optional<std::size_t> replicates, std::optional<std::size_t> workers) {
  auto cfg = load(c);
  if (!c.algo.empty()) cfg.bench.algorithms = parse_algorithms(c.algo);
  if (replicates) {
    if (*replicates < 1) throw UsageError("--replicates must be at least 1");
    cfg.bench.replicates = *replicates;
  }
  if (workers) {
    if (*workers < 1) throw UsageError("--workers must be at least 1");
    cfg.bench.workers = *workers;
  }
  const auto problem = resolve_problem(cfg);
  const bool quiet = c.quiet;
  const auto report = bench(problem, cfg, c.out, [quiet](const ReplicateOutcome& o) {
    if (quiet) return;
    if (o.ok)
      std::printf("%-7s rep %zu seed %llu: final hv %.6f (%.1fs)\n", to_string(o.algorithm).c_str(), o.replicate,
                  static_cast<unsigned long long>(o.seed), o.hypervolume.back(), o.seconds);
    else
      std::printf("%-7s rep %zu seed %llu: FAILED: %s\n", to_string(o.algorithm).c_str(), o.replicate,
                  static_cast<unsigned long long>(o.seed), o.error.c_str());
  });
  for (const auto& s : report.summaries)
    std::printf("%-7s median final hypervolume %.6f over %zu replicates\n", to_string(s.algorithm).c_str(),
                s.median_final, s.completed);
  if (report.max_hypervolume) std::printf("maximum hypervolume %.6f\n", *report.max_hypervolume);
  std::size_t failed = 0;
  for (const auto& o : report.outcomes) failed += o.ok ? 0 : 1;
  return failed == report.outcomes.size() ? kRuntimeError : 0;
}

int cmd_pareto(const std::string& in, const std::string& ref, bool quiet) {
  const auto reference = parse_reals(ref);
  const auto points = read_log(in);
  std::vector<std::vector<double>> objs;
  for (const auto& p : points)
    if (p.feasible) objs.push_back(p.objectives);
  if (!objs.empty() && objs.front().size() != reference.size())
    throw UsageError("--ref has " + std::to_string(reference.size()) + " entries but the log has " +
                     std::to_string(objs.front().size()) + " objectives");
  const auto front = pareto_filter(objs);
  std::vector<std::vector<double>> nd;
  for (auto i : front) nd.push_back(objs[i]);
  if (!quiet) {
    for (const auto& p : nd) {
      for (std::size_t m = 0; m < p.size(); ++m) std::printf(m ? ",%s" : "%s", format_real(p[m]).c_str());
      std::printf("\n");
    }
    std::printf("nondominated %zu of %zu feasible evaluations\n", nd.size(), objs.size());
  }
  std::printf("hypervolume %s\n", format_real(hypervolume(nd, reference)).c_str());
  return 0;
}

int cmd_sensitivity(const Common& c, const std::string& in, std::size_t point) {
  auto cfg = load(c);
  const auto problem = resolve_problem(cfg);
  const fs::path run_dir(in);
  std::ifstream summary_file(run_dir / "summary.json");
  if (!summary_file) throw UsageError("cannot open " + (run_dir / "summary.json").string());
  const auto summary = nlohmann::json::parse(summary_file);
  if (summary.at("algorithm") != "mobons") throw UsageError("sensitivity needs the output of a mobons run");
  const auto& archive = summary.at("archive");
  if (point >= archive.size())
    throw UsageError("--point " + std::to_string(point) + " is out of range (archive has " +
                     std::to_string(archive.size()) + " points)");
  const auto center = archive[point].at("design").get<std::vector<double>>();
  auto models = load_models(run_dir / "models.json", problem.network, problem.evaluators);

  LocalSobolOptions opts;
  opts.relative_box = cfg.sensitivity.relative_box;
  opts.extra_evals = cfg.sensitivity.extra_evals;
  opts.samples = cfg.sensitivity.samples;
  opts.seed = mix_seed(cfg.run.seed, "sensitivity");
  opts.fixed_point = cfg.run.fixed_point;
  opts.fit.family = cfg.run.gp.family;
  opts.fit.restarts = cfg.run.gp.restarts;
  const auto result = local_sobol(problem.network, models, problem.evaluators, center, opts);

  fs::create_directories(c.out);
  std::ofstream csv(fs::path(c.out) / "sensitivity.csv");
  write_sobol_csv(csv, result);
  if (!c.quiet) {
    std::printf("first-order indices around archive point %zu (%zu samples, %zu failures)\n", point,
                result.samples, result.failures);
    for (std::size_t m = 0; m < result.objectives; ++m)
      for (std::size_t i = 0; i < result.variables; ++i)
        std::printf("  g%zu x%zu  %.4f +/- %.4f\n", m, i, result.indices[m][i], result.standard_errors[m][i]);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-objective Bayesian optimization over function networks"};
  app.require_subcommand(1);

  Common common;
  std::optional<std::size_t> replicates, workers;
  std::string in, ref;
  std::size_t point = 0;

  auto add_common = [&](CLI::App* sub, bool need_config) {
    auto* opt = sub->add_option("--config", common.config, "YAML run configuration")->check(CLI::ExistingFile);
    if (need_config) opt->required();
    sub->add_option("--seed", common.seed, "Override the master seed");
    sub->add_option("--out", common.out, "Output directory")->capture_default_str();
    sub->add_flag("--quiet", common.quiet, "Only print the final result");
  };

  auto* run = app.add_subcommand("run", "One optimization run from a config file");
  add_common(run, true);
  run->add_option("--algo", common.algo, "mobons, qpots or random (overrides the config)");

  auto* bench_cmd = app.add_subcommand("bench", "Replicate study across algorithms");
  add_common(bench_cmd, true);
  bench_cmd->add_option("--algo", common.algo, "Comma-separated algorithms");
  bench_cmd->add_option("--replicates", replicates, "Number of replicates (seeds base..base+R-1)");
  bench_cmd->add_option("--workers", workers, "Concurrent replicate runs");

  auto* pareto = app.add_subcommand("pareto", "Pareto filter and hypervolume of a run log");
  pareto->add_option("--in", in, "log.csv written by run or bench")->required()->check(CLI::ExistingFile);
  pareto->add_option("--ref", ref, "Reference point, e.g. 1,500")->required();
  pareto->add_flag("--quiet", common.quiet, "Only print the hypervolume");

  auto* sens = app.add_subcommand("sensitivity", "Local first-order Sobol indices at an archive point");
  add_common(sens, true);
  sens->add_option("--in", in, "Output directory of a mobons run")->required()->check(CLI::ExistingDirectory);
  sens->add_option("--point", point, "Index into the run's final archive")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  try {
    if (*run) return cmd_run(common);
    if (*bench_cmd) return cmd_bench(common, replicates, workers);
    if (*pareto) return cmd_pareto(in, ref, common.quiet);
    if (*sens) return cmd_sensitivity(common, in, point);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kUsageError;
  } catch (const UsageError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kUsageError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kRuntimeError;
  }
  return kUsageError;
}
