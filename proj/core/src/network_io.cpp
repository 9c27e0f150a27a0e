#include "mobons/network_io.hpp"

#include <fstream>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "mobons/errors.hpp"
#include "yaml_util.hpp"

namespace mobons {

namespace {

Eigen::MatrixXd read_matrix(const YamlReader& in, const YAML::Node& node, std::size_t cols,
                            const char* what) {
  if (!node.IsSequence() || node.size() == 0) in.fail(node, std::string(what) + " must be a list of rows");
  Eigen::MatrixXd m(static_cast<Eigen::Index>(node.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < node.size(); ++r) {
    auto row = in.doubles(node[r], what);
    if (row.size() != cols)
      in.fail(node[r], std::string(what) + " row needs " + std::to_string(cols) + " entries");
    for (std::size_t c = 0; c < cols; ++c) m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = row[c];
  }
  return m;
}

}  // namespace

LoadedNetwork parse_network(const std::string& text, const std::string& source,
                            const EvaluatorRegistry& registry) {
  YamlReader in(source);
  YAML::Node root = in.parse(text);
  if (!root.IsMap()) in.fail(root, "network file must be a mapping");

  std::vector<Interval> design_box;
  const auto box_node = in.required(root, "design_box");
  if (!box_node.IsSequence()) in.fail(box_node, "design_box must be a list of [lower, upper]");
  for (const auto& b : box_node) design_box.push_back(in.interval(b, "design_box"));

  const auto nodes_node = in.required(root, "nodes");
  if (!nodes_node.IsSequence() || nodes_node.size() == 0) in.fail(nodes_node, "nodes must be a non-empty list");

  std::vector<NodeSpec> specs;
  std::vector<NodeFunction> evaluators;
  for (const auto& n : nodes_node) {
    if (!n.IsMap()) in.fail(n, "each node must be a mapping");
    NodeSpec spec;
    spec.name = n["name"] ? in.string(n["name"], "name") : "";
    try {
      spec.kind = node_kind_from_string(in.string(in.required(n, "kind"), "kind"));
    } catch (const std::invalid_argument& e) {
      in.fail(n["kind"], e.what());
    }
    if (n["design_inputs"]) spec.design_inputs = in.indices(n["design_inputs"], "design_inputs");
    if (n["node_inputs"]) spec.node_inputs = in.indices(n["node_inputs"], "node_inputs");
    spec.output_box = in.interval(in.required(n, "output_box"), "output_box");

    const auto fn_node = in.required(n, "function");
    const auto fn = in.string(fn_node, "function");
    std::vector<double> params;
    if (n["params"]) params = in.doubles(n["params"], "params");
    try {
      evaluators.push_back(registry.make(fn, params));
    } catch (const std::invalid_argument& e) {
      in.fail(fn_node, e.what());
    }
    specs.push_back(std::move(spec));
  }
  const auto k_count = specs.size();

  if (root["edges"]) {
    std::vector<Edge> listed;
    for (const auto& e : root["edges"]) {
      auto pair = in.indices(e, "edges");
      if (pair.size() != 2) in.fail(e, "edge must be [from, to]");
      listed.emplace_back(pair[0], pair[1]);
    }
    std::sort(listed.begin(), listed.end());
    listed.erase(std::unique(listed.begin(), listed.end()), listed.end());
    std::vector<Edge> derived;
    for (std::size_t k = 0; k < k_count; ++k)
      for (auto j : specs[k].node_inputs) derived.emplace_back(j, k);
    std::sort(derived.begin(), derived.end());
    derived.erase(std::unique(derived.begin(), derived.end()), derived.end());
    if (listed != derived) in.fail(root["edges"], "edges do not match the nodes' node_inputs");
  }

  auto objectives = read_matrix(in, in.required(root, "objectives"), k_count, "objectives");
  std::optional<Eigen::MatrixXd> constraints;
  if (root["constraints"]) constraints = read_matrix(in, root["constraints"], k_count, "constraints");

  std::vector<double> reference;
  if (root["reference_point"]) {
    reference = in.doubles(root["reference_point"], "reference_point");
    if (reference.size() != static_cast<std::size_t>(objectives.rows()))
      in.fail(root["reference_point"], "reference_point needs one entry per objective");
  }

  try {
    return LoadedNetwork{FunctionNetwork(std::move(design_box), std::move(specs), std::move(objectives),
                                         std::move(constraints)),
                         std::move(evaluators), std::move(reference)};
  } catch (const std::invalid_argument& e) {
    throw ConfigError(source, 0, e.what());
  }
}

LoadedNetwork load_network(const std::filesystem::path& path, const EvaluatorRegistry& registry) {
  std::ifstream f(path);
  if (!f) throw ConfigError(path.string(), 0, "cannot open file");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_network(ss.str(), path.string(), registry);
}

}  // namespace mobons
