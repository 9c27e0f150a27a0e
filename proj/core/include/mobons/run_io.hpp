#pragma once

#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <string>
#include <vector>

#include "mobons/config.hpp"
#include "mobons/mobons.hpp"

namespace mobons {

/// Append-only evaluation log. Columns:
///   index,iteration,initial,x0..,y0..,g0..,h0..,residual,feasible,hypervolume,wall_time
/// Reals are written with 17 significant digits so they round-trip exactly.
void write_log_header(std::ostream& os, const FunctionNetwork& net);
void write_log_row(std::ostream& os, const EvaluationRecord& record, double hypervolume);

/// Opens `path`, writes the header and appends one flushed row per record,
/// so partial logs survive an aborted run.
class LogWriter {
 public:
  LogWriter(const std::filesystem::path& path, const FunctionNetwork& net);
  void operator()(const EvaluationRecord& record, double hypervolume);
  RecordObserver observer();

 private:
  std::ofstream out_;
};

struct LoggedPoint {
  std::vector<double> design;
  std::vector<double> objectives;
  bool feasible = true;
};

/// Reads the design and objective columns of a log written by LogWriter.
std::vector<LoggedPoint> read_log(const std::filesystem::path& path);

/// End-of-run JSON: final archive, hypervolume trajectory, seeds, counters
/// and an echo of the configuration.
std::string summary_json(const RunResult& result, const AppConfig& config, const FunctionNetwork& net);
void write_summary(const std::filesystem::path& path, const RunResult& result, const AppConfig& config,
                   const FunctionNetwork& net);

/// Config echo as a JSON object string.
std::string config_json(const AppConfig& config);

std::string format_real(double v);

}  // namespace mobons
