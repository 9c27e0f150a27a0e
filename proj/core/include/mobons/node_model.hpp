#pragma once

#include <filesystem>
#include <span>
#include <variant>
#include <vector>

#include "mobons/gp.hpp"
#include "mobons/network.hpp"

namespace mobons {

/// Surrogate for a node whose function is known exactly: prior mean f_k and
/// zero covariance, so the posterior mean is f_k and every draw equals f_k.
class WhiteBoxModel {
 public:
  explicit WhiteBoxModel(NodeFunction f) : f_(std::move(f)) {}

  double mean(std::span<const double> z) const { return f_(z); }
  double variance(std::span<const double>) const { return 0.0; }
  const NodeFunction& function() const { return f_; }

 private:
  NodeFunction f_;
};

using NodeModel = std::variant<PosteriorGP, WhiteBoxModel>;

WhiteBoxModel whitebox_surrogate(const NodeSpec& node, NodeFunction f);

double model_mean(const NodeModel& model, std::span<const double> z);
double model_variance(const NodeModel& model, std::span<const double> z);

/// Posterior-mean evaluators, one per node.
std::vector<NodeFunction> mean_network(std::span<const NodeModel> models);

/// JSON checkpoint of every node model. White-box nodes are stored by
/// reference and rebound to the supplied evaluators on load.
void save_models(const std::filesystem::path& path, std::span<const NodeModel> models);
std::vector<NodeModel> load_models(const std::filesystem::path& path, const FunctionNetwork& net,
                                   std::span<const NodeFunction> evaluators);

}  // namespace mobons
