#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mobons/network.hpp"

namespace mobons {

struct ProblemSpec {
  std::string id;
  FunctionNetwork network;
  std::vector<NodeFunction> evaluators;
  std::vector<double> reference_point;
  /// Hypervolume of the true Pareto front w.r.t. reference_point, when known.
  std::optional<double> max_hypervolume;
};

/// ZDT4 as an 11-node network: y_0 = x_0, y_k = x_k^2 - 10 cos(4 pi x_k)
/// (black-box), y_10 = h (1 - sqrt(y_0 / h)) with h = 91 + sum y_1..y_9
/// (white-box). Objectives (y_0, y_10), reference (1, 500).
ProblemSpec build_zdt4_network();

/// y_0 = 0.5 y_1 + x, y_1 = 0.5 y_0 (black-box cycle) and the white-box
/// node y_2 = (y_0 - 1)^2. Objectives (y_0, y_2) on x in [0, 0.75].
ProblemSpec build_cyclic_toy();

/// The cyclic toy plus the white-box node y_3 = y_0 - 0.8 and the
/// constraint y_3 <= 0.
ProblemSpec build_constrained_toy();

/// "zdt4", "cyclic" or "constrained".
ProblemSpec make_problem(const std::string& id);
std::vector<std::string> problem_ids();

}  // namespace mobons
