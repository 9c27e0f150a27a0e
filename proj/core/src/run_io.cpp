#include "mobons/run_io.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "mobons/metrics.hpp"

namespace mobons {

namespace {

using nlohmann::json;

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string hex(std::uint64_t v) {
  char buf[19];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

json config_object(const AppConfig& c) {
  const auto& r = c.run;
  json j;
  j["problem"] = r.problem;
  if (!c.network_path.empty()) j["network"] = c.network_path.string();
  j["algorithm"] = to_string(r.algorithm);
  j["init_budget"] = r.init_budget;
  j["total_budget"] = r.total_budget;
  j["batch_size"] = r.batch_size;
  j["seed"] = r.seed;
  j["reference_point"] = r.reference_point;
  j["mode"] = to_string(r.mode);
  j["max_redraws"] = r.max_redraws;
  j["feasibility_tolerance"] = r.feasibility_tolerance;
  j["nsga"] = {{"population_size", r.nsga.population_size},
               {"generations", r.nsga.generations},
               {"crossover_probability", r.nsga.crossover_probability},
               {"crossover_eta", r.nsga.crossover_eta},
               {"mutation_probability", r.nsga.mutation_probability},
               {"mutation_eta", r.nsga.mutation_eta}};
  j["sampler"] = {{"num_features", r.num_features}};
  j["fixed_point"] = {{"damping", r.fixed_point.damping},
                      {"tolerance", r.fixed_point.tolerance},
                      {"max_iterations", r.fixed_point.max_iterations}};
  j["gp"] = {{"kernel", to_string(r.gp.family)},
             {"restarts", r.gp.restarts},
             {"refit_every_until", r.gp.refit_every_until},
             {"refit_interval", r.gp.refit_interval}};
  json algos = json::array();
  for (auto a : c.bench.algorithms) algos.push_back(to_string(a));
  j["bench"] = {{"replicates", c.bench.replicates}, {"algorithms", algos}, {"workers", c.bench.workers}};
  j["sensitivity"] = {{"relative_box", c.sensitivity.relative_box},
                      {"extra_evals", c.sensitivity.extra_evals},
                      {"samples", c.sensitivity.samples}};
  return j;
}

}  // namespace

std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_log_header(std::ostream& os, const FunctionNetwork& net) {
  os << "index,iteration,initial";
  for (std::size_t i = 0; i < net.design_dim(); ++i) os << ",x" << i;
  for (std::size_t i = 0; i < net.node_count(); ++i) os << ",y" << i;
  for (std::size_t i = 0; i < net.objective_count(); ++i) os << ",g" << i;
  for (std::size_t i = 0; i < net.constraint_count(); ++i) os << ",h" << i;
  os << ",residual,feasible,hypervolume,wall_time\n";
}

void write_log_row(std::ostream& os, const EvaluationRecord& r, double hypervolume) {
  os << r.index << ',' << r.iteration << ',' << (r.initial ? 1 : 0);
  for (double v : r.design) os << ',' << format_real(v);
  for (double v : r.outputs) os << ',' << format_real(v);
  for (double v : r.objectives) os << ',' << format_real(v);
  for (double v : r.constraints) os << ',' << format_real(v);
  os << ',' << format_real(r.residual) << ',' << (r.feasible ? 1 : 0) << ',' << format_real(hypervolume) << ','
     << format_real(r.wall_time) << '\n';
}

LogWriter::LogWriter(const std::filesystem::path& path, const FunctionNetwork& net) : out_(path) {
  if (!out_) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_log_header(out_, net);
  out_.flush();
}

void LogWriter::operator()(const EvaluationRecord& record, double hypervolume) {
  write_log_row(out_, record, hypervolume);
  out_.flush();
}

RecordObserver LogWriter::observer() {
  return [this](const EvaluationRecord& r, double hv) { (*this)(r, hv); };
}

std::vector<LoggedPoint> read_log(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path.string() + ": empty log");
  const auto header = split(line);
  std::vector<std::size_t> xcols, gcols;
  std::size_t feasible_col = header.size();
  for (std::size_t i = 0; i < header.size(); ++i) {
    const auto& h = header[i];
    if (h.size() > 1 && h[0] == 'x' && std::isdigit(static_cast<unsigned char>(h[1]))) xcols.push_back(i);
    if (h.size() > 1 && h[0] == 'g' && std::isdigit(static_cast<unsigned char>(h[1]))) gcols.push_back(i);
    if (h == "feasible") feasible_col = i;
  }
  if (gcols.empty()) throw std::runtime_error(path.string() + ": no objective columns (g0, g1, ...)");

  std::vector<LoggedPoint> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != header.size())
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": expected " +
                               std::to_string(header.size()) + " columns");
    LoggedPoint p;
    try {
      for (auto c : xcols) p.design.push_back(std::stod(cells[c]));
      for (auto c : gcols) p.objectives.push_back(std::stod(cells[c]));
    } catch (const std::exception&) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": malformed number");
    }
    if (feasible_col < cells.size()) p.feasible = cells[feasible_col] == "1";
    out.push_back(std::move(p));
  }
  return out;
}

std::string config_json(const AppConfig& config) { return config_object(config).dump(2); }

std::string summary_json(const RunResult& result, const AppConfig& config, const FunctionNetwork& net) {
  json j;
  j["algorithm"] = to_string(result.algorithm);
  j["problem"] = config.run.problem;
  j["seed"] = config.run.seed;
  j["initial_design_hash"] = hex(result.initial_design_hash);
  j["evaluations"] = result.records.size();
  j["acquisition_rounds"] = result.acquisition_rounds;
  j["redraws"] = result.redraws;
  j["random_fallbacks"] = result.random_fallbacks;
  j["reference_point"] = result.archive.reference();
  j["final_hypervolume"] = result.hypervolume.empty() ? 0.0 : result.hypervolume.back();
  j["hypervolume"] = result.hypervolume;
  json archive = json::array();
  for (const auto& e : result.archive.entries()) {
    const auto& r = result.records.at(e.record);
    archive.push_back({{"index", r.index},
                       {"iteration", r.iteration},
                       {"design", r.design},
                       {"outputs", r.outputs},
                       {"objectives", r.objectives},
                       {"constraints", r.constraints}});
  }
  j["archive"] = archive;
  j["network"] = {{"nodes", net.node_count()},
                  {"design_dim", net.design_dim()},
                  {"objectives", net.objective_count()},
                  {"constraints", net.constraint_count()},
                  {"acyclic", net.is_acyclic()}};
  j["config"] = config_object(config);
  return j.dump(2);
}

void write_summary(const std::filesystem::path& path, const RunResult& result, const AppConfig& config,
                   const FunctionNetwork& net) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << summary_json(result, config, net) << '\n';
}

}  // namespace mobons
