#include "mobons/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "mobons/run_io.hpp"

namespace mobons {

namespace {

using nlohmann::json;

std::string run_stem(Algorithm a, std::size_t rep) { return to_string(a) + "_" + std::to_string(rep); }

ReplicateOutcome run_replicate(const ProblemSpec& problem, const AppConfig& base, Algorithm algorithm,
                               std::size_t rep, const std::filesystem::path& out_dir) {
  ReplicateOutcome o;
  o.algorithm = algorithm;
  o.replicate = rep;
  o.seed = base.run.seed + rep;
  AppConfig cfg = base;
  cfg.run.algorithm = algorithm;
  cfg.run.seed = o.seed;
  cfg.run.reference_point = problem.reference_point;
  const auto start = std::chrono::steady_clock::now();
  try {
    std::optional<LogWriter> log;
    if (!out_dir.empty()) log.emplace(out_dir / ("log_" + run_stem(algorithm, rep) + ".csv"), problem.network);
    const auto result =
        run_algorithm(problem.network, problem.evaluators, cfg.run, log ? log->observer() : RecordObserver{});
    if (!out_dir.empty())
      write_summary(out_dir / ("summary_" + run_stem(algorithm, rep) + ".json"), result, cfg, problem.network);
    o.initial_design_hash = result.initial_design_hash;
    o.hypervolume = result.hypervolume;
    for (const auto& r : result.records) {
      o.objectives.push_back(r.objectives);
      o.feasible.push_back(r.feasible);
    }
    o.ok = true;
  } catch (const std::exception& e) {
    o.error = e.what();
  }
  o.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return o;
}

AlgorithmSummary summarize(Algorithm algorithm, const std::vector<ReplicateOutcome>& outcomes) {
  AlgorithmSummary s;
  s.algorithm = algorithm;
  std::vector<const ReplicateOutcome*> done;
  for (const auto& o : outcomes)
    if (o.algorithm == algorithm && o.ok) done.push_back(&o);
  s.completed = done.size();
  if (done.empty()) return s;

  std::size_t len = done.front()->hypervolume.size();
  for (const auto* o : done) len = std::min(len, o->hypervolume.size());
  for (std::size_t t = 0; t < len; ++t) {
    std::vector<double> column;
    for (const auto* o : done) column.push_back(o->hypervolume[t]);
    s.median_curve.push_back(quantile(column, 0.5));
    s.lower_quartile_curve.push_back(quantile(column, 0.25));
    s.upper_quartile_curve.push_back(quantile(column, 0.75));
  }
  std::vector<std::pair<double, std::size_t>> finals;
  for (const auto* o : done) {
    s.final_hypervolumes.push_back(o->hypervolume.back());
    finals.emplace_back(o->hypervolume.back(), o->replicate);
  }
  s.median_final = quantile(s.final_hypervolumes, 0.5);
  std::sort(finals.begin(), finals.end());
  s.median_replicate = finals[(finals.size() - 1) / 2].second;
  return s;
}

}  // namespace

const AlgorithmSummary* BenchReport::summary(Algorithm algorithm) const {
  for (const auto& s : summaries)
    if (s.algorithm == algorithm) return &s;
  return nullptr;
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("quantile of an empty set");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

BenchReport bench(const ProblemSpec& problem, const AppConfig& config, const std::filesystem::path& out_dir,
                  const BenchProgress& progress) {
  const auto& settings = config.bench;
  if (settings.replicates < 1) throw std::invalid_argument("replicates must be at least 1");
  if (settings.algorithms.empty()) throw std::invalid_argument("no algorithms selected");
  if (!out_dir.empty()) std::filesystem::create_directories(out_dir);

  struct Task {
    Algorithm algorithm;
    std::size_t replicate;
  };
  std::vector<Task> tasks;
  for (std::size_t rep = 0; rep < settings.replicates; ++rep)
    for (auto a : settings.algorithms) tasks.push_back({a, rep});

  std::vector<ReplicateOutcome> outcomes(tasks.size());
  std::atomic<std::size_t> next{0};
  std::mutex progress_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      outcomes[i] = run_replicate(problem, config, tasks[i].algorithm, tasks[i].replicate, out_dir);
      if (progress) {
        std::lock_guard lock(progress_mutex);
        progress(outcomes[i]);
      }
    }
  };
  const auto workers = std::max<std::size_t>(1, std::min(settings.workers, tasks.size()));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  BenchReport report;
  report.problem = problem.id;
  report.max_hypervolume = problem.max_hypervolume;
  report.outcomes = std::move(outcomes);
  for (auto a : settings.algorithms) report.summaries.push_back(summarize(a, report.outcomes));
  std::map<std::size_t, std::uint64_t> hashes;
  for (const auto& o : report.outcomes) {
    if (!o.ok) continue;
    auto [it, inserted] = hashes.emplace(o.replicate, o.initial_design_hash);
    if (!inserted && it->second != o.initial_design_hash) report.consistent_initial_designs = false;
  }
  if (!out_dir.empty()) write_bench_outputs(out_dir, report, config);
  return report;
}

void write_bench_outputs(const std::filesystem::path& out_dir, const BenchReport& report, const AppConfig& config) {
  json j;
  j["problem"] = report.problem;
  j["max_hypervolume"] = report.max_hypervolume ? json(*report.max_hypervolume) : json(nullptr);
  j["consistent_initial_designs"] = report.consistent_initial_designs;
  j["config"] = json::parse(config_json(config));
  json runs = json::array();
  for (const auto& o : report.outcomes) {
    char hash[19];
    std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(o.initial_design_hash));
    json r = {{"algorithm", to_string(o.algorithm)},
              {"replicate", o.replicate},
              {"seed", o.seed},
              {"ok", o.ok},
              {"seconds", o.seconds}};
    if (o.ok) {
      r["initial_design_hash"] = hash;
      r["final_hypervolume"] = o.hypervolume.back();
      r["hypervolume"] = o.hypervolume;
    } else {
      r["error"] = o.error;
    }
    runs.push_back(std::move(r));
  }
  j["runs"] = runs;
  json algos = json::array();
  for (const auto& s : report.summaries) {
    algos.push_back({{"algorithm", to_string(s.algorithm)},
                     {"completed", s.completed},
                     {"median_final_hypervolume", s.median_final},
                     {"final_hypervolumes", s.final_hypervolumes},
                     {"median_replicate", s.median_replicate},
                     {"median_curve", s.median_curve},
                     {"lower_quartile_curve", s.lower_quartile_curve},
                     {"upper_quartile_curve", s.upper_quartile_curve}});
  }
  j["algorithms"] = algos;
  std::ofstream(out_dir / "bench_report.json") << j.dump(2) << '\n';

  std::ofstream curves(out_dir / "hv_curves.csv");
  curves << "iteration,algorithm,replicate,hypervolume\n";
  for (const auto& o : report.outcomes) {
    if (!o.ok) continue;
    for (std::size_t t = 0; t < o.hypervolume.size(); ++t)
      curves << t << ',' << to_string(o.algorithm) << ',' << o.replicate << ',' << format_real(o.hypervolume[t])
             << '\n';
  }

  for (const auto& s : report.summaries) {
    std::ofstream scatter(out_dir / ("scatter_" + to_string(s.algorithm) + ".csv"));
    bool header = false;
    for (const auto& o : report.outcomes) {
      if (!o.ok || o.algorithm != s.algorithm) continue;
      if (!header) {
        scatter << "replicate,median_replicate,evaluation";
        for (std::size_t m = 0; m < o.objectives.front().size(); ++m) scatter << ",g" << m;
        scatter << ",feasible\n";
        header = true;
      }
      const int is_median = o.replicate == s.median_replicate ? 1 : 0;
      for (std::size_t i = 0; i < o.objectives.size(); ++i) {
        scatter << o.replicate << ',' << is_median << ',' << i;
        for (double g : o.objectives[i]) scatter << ',' << format_real(g);
        scatter << ',' << (o.feasible[i] ? 1 : 0) << '\n';
      }
    }
  }
}

}  // namespace mobons
