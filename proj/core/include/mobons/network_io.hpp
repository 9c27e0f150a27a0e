#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "mobons/network.hpp"
#include "mobons/registry.hpp"

namespace mobons {

struct LoadedNetwork {
  FunctionNetwork network;
  std::vector<NodeFunction> evaluators;
  std::vector<double> reference_point;  // empty when the file gives none
};

/// Parses a YAML network definition. Node indices are 0-based. Throws
/// ConfigError carrying the offending line.
///
///   design_box: [[0, 1], [-10, 10]]
///   nodes:
///     - {name: y0, kind: black-box, function: identity,
///        design_inputs: [0], node_inputs: [], output_box: [0, 1]}
///   edges: [[0, 1]]          # optional, must match node_inputs
///   objectives: [[1, 0]]
///   constraints: [[0, 1]]    # optional
///   reference_point: [1, 1]  # optional
LoadedNetwork parse_network(const std::string& text, const std::string& source = "network",
                            const EvaluatorRegistry& registry = EvaluatorRegistry::builtin());
LoadedNetwork load_network(const std::filesystem::path& path,
                           const EvaluatorRegistry& registry = EvaluatorRegistry::builtin());

}  // namespace mobons
