#include "mobons/node_model.hpp"

#include <fstream>
#include <memory>

#include <json.hpp>

#include "gp_json.hpp"

namespace mobons {

WhiteBoxModel whitebox_surrogate(const NodeSpec& node, NodeFunction f) {
  if (node.kind != NodeKind::WhiteBox)
    throw std::invalid_argument("whitebox_surrogate requires a white-box node ('" + node.name + "')");
  return WhiteBoxModel(std::move(f));
}

double model_mean(const NodeModel& model, std::span<const double> z) {
  return std::visit([&](const auto& m) { return m.mean(z); }, model);
}

double model_variance(const NodeModel& model, std::span<const double> z) {
  return std::visit([&](const auto& m) { return m.variance(z); }, model);
}

std::vector<NodeFunction> mean_network(std::span<const NodeModel> models) {
  std::vector<NodeFunction> out;
  out.reserve(models.size());
  for (const auto& m : models) {
    if (const auto* wb = std::get_if<WhiteBoxModel>(&m)) {
      out.push_back(wb->function());
    } else {
      auto gp = std::make_shared<const PosteriorGP>(std::get<PosteriorGP>(m));
      out.push_back([gp](std::span<const double> z) { return gp->mean(z); });
    }
  }
  return out;
}

void save_models(const std::filesystem::path& path, std::span<const NodeModel> models) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& m : models) {
    if (std::holds_alternative<WhiteBoxModel>(m)) {
      j.push_back({{"kind", "white-box"}});
    } else {
      j.push_back({{"kind", "gp"}, {"gp", gp_to_json(std::get<PosteriorGP>(m))}});
    }
  }
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << j.dump(1) << '\n';
}

std::vector<NodeModel> load_models(const std::filesystem::path& path, const FunctionNetwork& net,
                                   std::span<const NodeFunction> evaluators) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path.string());
  const auto j = nlohmann::json::parse(f);
  if (!j.is_array() || j.size() != net.node_count())
    throw std::runtime_error(path.string() + ": expected one model per node");
  std::vector<NodeModel> models;
  for (std::size_t k = 0; k < j.size(); ++k) {
    if (j[k].at("kind") == "white-box") {
      models.emplace_back(whitebox_surrogate(net.node(k), evaluators[k]));
    } else {
      models.emplace_back(gp_from_json(j[k].at("gp")));
    }
  }
  return models;
}

}  // namespace mobons
