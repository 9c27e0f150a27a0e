#include "mobons/config.hpp"

#include <fstream>
#include <sstream>

#include "mobons/network_io.hpp"
#include "yaml_util.hpp"

namespace mobons {

namespace {

template <typename Fn>
auto converted(const YamlReader& in, const YAML::Node& node, const std::string& what, Fn&& fn) {
  const auto text = in.string(node, what);
  try {
    return fn(text);
  } catch (const std::invalid_argument& e) {
    in.fail(node, e.what());
  }
}

void read_nsga(const YamlReader& in, const YAML::Node& n, NsgaConfig& c) {
  in.check_keys(n, {"population_size", "generations", "crossover_probability", "crossover_eta",
                    "mutation_probability", "mutation_eta"});
  if (n["population_size"]) c.population_size = in.unsigned_int(n["population_size"], "nsga.population_size");
  if (n["generations"]) c.generations = in.unsigned_int(n["generations"], "nsga.generations");
  if (n["crossover_probability"])
    c.crossover_probability = in.real(n["crossover_probability"], "nsga.crossover_probability");
  if (n["crossover_eta"]) c.crossover_eta = in.real(n["crossover_eta"], "nsga.crossover_eta");
  if (n["mutation_probability"])
    c.mutation_probability = in.real(n["mutation_probability"], "nsga.mutation_probability");
  if (n["mutation_eta"]) c.mutation_eta = in.real(n["mutation_eta"], "nsga.mutation_eta");
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    in.fail(n, e.what());
  }
}

void read_fixed_point(const YamlReader& in, const YAML::Node& n, FixedPointOptions& c) {
  in.check_keys(n, {"damping", "tolerance", "max_iterations"});
  if (n["damping"]) c.damping = in.real(n["damping"], "fixed_point.damping");
  if (n["tolerance"]) c.tolerance = in.real(n["tolerance"], "fixed_point.tolerance");
  if (n["max_iterations"]) c.max_iterations = in.unsigned_int(n["max_iterations"], "fixed_point.max_iterations");
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    in.fail(n, e.what());
  }
}

void read_gp(const YamlReader& in, const YAML::Node& n, GpSettings& c) {
  in.check_keys(n, {"kernel", "restarts", "refit_every_until", "refit_interval"});
  if (n["kernel"]) c.family = converted(in, n["kernel"], "gp.kernel", kernel_family_from_string);
  if (n["restarts"]) c.restarts = static_cast<int>(in.unsigned_int(n["restarts"], "gp.restarts"));
  if (n["refit_every_until"]) c.refit_every_until = in.unsigned_int(n["refit_every_until"], "gp.refit_every_until");
  if (n["refit_interval"]) {
    c.refit_interval = in.unsigned_int(n["refit_interval"], "gp.refit_interval");
    if (c.refit_interval < 1) in.fail(n["refit_interval"], "gp.refit_interval must be at least 1");
  }
}

void read_bench(const YamlReader& in, const YAML::Node& n, BenchSettings& c) {
  in.check_keys(n, {"replicates", "algorithms", "workers"});
  if (n["replicates"]) {
    c.replicates = in.unsigned_int(n["replicates"], "bench.replicates");
    if (c.replicates < 1) in.fail(n["replicates"], "bench.replicates must be at least 1");
  }
  if (n["algorithms"]) {
    const auto list = n["algorithms"];
    if (!list.IsSequence() || list.size() == 0) in.fail(list, "bench.algorithms must be a non-empty list");
    c.algorithms.clear();
    for (const auto& a : list) c.algorithms.push_back(converted(in, a, "bench.algorithms", algorithm_from_string));
  }
  if (n["workers"]) {
    c.workers = in.unsigned_int(n["workers"], "bench.workers");
    if (c.workers < 1) in.fail(n["workers"], "bench.workers must be at least 1");
  }
}

void read_sensitivity(const YamlReader& in, const YAML::Node& n, SensitivitySettings& c) {
  in.check_keys(n, {"relative_box", "extra_evals", "samples"});
  if (n["relative_box"]) {
    c.relative_box = in.real(n["relative_box"], "sensitivity.relative_box");
    if (!(c.relative_box > 0.0)) in.fail(n["relative_box"], "sensitivity.relative_box must be positive");
  }
  if (n["extra_evals"]) c.extra_evals = in.unsigned_int(n["extra_evals"], "sensitivity.extra_evals");
  if (n["samples"]) {
    c.samples = in.unsigned_int(n["samples"], "sensitivity.samples");
    if (c.samples < 2) in.fail(n["samples"], "sensitivity.samples must be at least 2");
  }
}

}  // namespace

AppConfig parse_config(const std::string& text, const std::string& source, const std::filesystem::path& base_dir) {
  YamlReader in(source);
  const auto root = in.parse(text);
  if (!root.IsMap()) in.fail(root, "config must be a mapping");
  in.check_keys(root, {"problem", "network", "algorithm", "init_budget", "total_budget", "batch_size", "seed",
                       "reference_point", "mode", "max_redraws", "feasibility_tolerance", "nsga", "sampler",
                       "fixed_point", "gp", "bench", "sensitivity"});
  AppConfig cfg;
  auto& run = cfg.run;
  if (root["problem"] && root["network"]) in.fail(root["network"], "give either 'problem' or 'network', not both");
  if (root["problem"]) {
    run.problem = in.string(root["problem"], "problem");
    bool known = false;
    for (const auto& id : problem_ids()) known = known || id == run.problem;
    if (!known) in.fail(root["problem"], "unknown problem '" + run.problem + "'");
  } else if (root["network"]) {
    cfg.network_path = in.string(root["network"], "network");
    if (cfg.network_path.is_relative() && !base_dir.empty()) cfg.network_path = base_dir / cfg.network_path;
    run.problem = cfg.network_path.stem().string();
  } else {
    in.fail(root, "missing required key 'problem' (or 'network')");
  }

  if (root["algorithm"]) run.algorithm = converted(in, root["algorithm"], "algorithm", algorithm_from_string);
  if (root["init_budget"]) run.init_budget = in.unsigned_int(root["init_budget"], "init_budget");
  if (root["total_budget"]) run.total_budget = in.unsigned_int(root["total_budget"], "total_budget");
  if (root["batch_size"]) run.batch_size = in.unsigned_int(root["batch_size"], "batch_size");
  if (root["seed"]) run.seed = in.unsigned_int(root["seed"], "seed");
  if (root["reference_point"]) run.reference_point = in.doubles(root["reference_point"], "reference_point");
  if (root["mode"]) run.mode = converted(in, root["mode"], "mode", subproblem_mode_from_string);
  if (root["max_redraws"]) run.max_redraws = in.unsigned_int(root["max_redraws"], "max_redraws");
  if (root["feasibility_tolerance"])
    run.feasibility_tolerance = in.real(root["feasibility_tolerance"], "feasibility_tolerance");
  if (root["nsga"]) read_nsga(in, root["nsga"], run.nsga);
  if (const auto s = root["sampler"]) {
    in.check_keys(s, {"num_features"});
    if (s["num_features"]) run.num_features = in.unsigned_int(s["num_features"], "sampler.num_features");
  }
  if (root["fixed_point"]) read_fixed_point(in, root["fixed_point"], run.fixed_point);
  if (root["gp"]) read_gp(in, root["gp"], run.gp);
  if (root["bench"]) read_bench(in, root["bench"], cfg.bench);
  if (root["sensitivity"]) read_sensitivity(in, root["sensitivity"], cfg.sensitivity);

  try {
    run.validate();
  } catch (const std::invalid_argument& e) {
    in.fail(root, e.what());
  }
  return cfg;
}

AppConfig load_config(const std::filesystem::path& path) {
  std::ifstream file(path);
  if (!file) throw ConfigError(path.string(), 0, "cannot open file");
  std::ostringstream text;
  text << file.rdbuf();
  return parse_config(text.str(), path.string(), path.parent_path());
}

ProblemSpec resolve_problem(AppConfig& config) {
  ProblemSpec spec = [&] {
    if (config.network_path.empty()) return make_problem(config.run.problem);
    auto loaded = load_network(config.network_path);
    return ProblemSpec{config.run.problem, std::move(loaded.network), std::move(loaded.evaluators),
                       std::move(loaded.reference_point), std::nullopt};
  }();
  if (config.run.reference_point.empty()) config.run.reference_point = spec.reference_point;
  if (config.run.reference_point.empty())
    throw ConfigError(config.network_path.string(), 0, "no reference_point given in the config or the network");
  if (config.run.reference_point.size() != spec.network.objective_count())
    throw ConfigError("config", 0,
                      "reference_point has " + std::to_string(config.run.reference_point.size()) +
                          " entries but the problem has " + std::to_string(spec.network.objective_count()) +
                          " objectives");
  spec.reference_point = config.run.reference_point;
  return spec;
}

}  // namespace mobons
