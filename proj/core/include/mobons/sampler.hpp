#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "mobons/kernel.hpp"
#include "mobons/node_model.hpp"

namespace mobons {

/// Random Fourier features phi(u) = scale * cos(W u + b) for a stationary
/// kernel, with scale = sqrt(2 s2 / L). Frequencies come from the kernel's
/// spectral density: Gaussian for RBF, Student-t with 5 dof for Matern-5/2.
struct FeatureMap {
  Eigen::MatrixXd frequencies;  // L x d
  Eigen::VectorXd phases;       // L
  double scale = 0.0;

  std::size_t size() const { return static_cast<std::size_t>(phases.size()); }
  Eigen::VectorXd features(const Eigen::Ref<const Eigen::VectorXd>& u) const;
  /// phi(u) . phi(u'), an unbiased estimate of the kernel.
  double approximate_kernel(const Eigen::Ref<const Eigen::VectorXd>& u,
                            const Eigen::Ref<const Eigen::VectorXd>& up) const;
};

FeatureMap build_feature_map(const KernelSpec& kernel, std::size_t num_features, std::uint64_t seed);

/// One deterministic posterior function draw: weight-space prior sample plus
/// a kernel-basis correction that conditions it on the training data.
/// White-box nodes yield the exact node function.
class SampledPath {
 public:
  static SampledPath from_gp(const PosteriorGP& gp, std::size_t num_features, std::uint64_t seed);
  static SampledPath exact(NodeFunction f);

  double operator()(std::span<const double> z) const;

  bool is_exact() const { return static_cast<bool>(exact_); }
  const FeatureMap& feature_map() const { return features_; }
  const Eigen::VectorXd& prior_weights() const { return weights_; }
  const Eigen::VectorXd& update_coefficients() const { return update_; }

 private:
  SampledPath() = default;
  double prior(const double* u) const;  // weight-space prior draw, standardized input

  NodeFunction exact_;
  std::shared_ptr<const PosteriorGP> gp_;
  FeatureMap features_;
  Eigen::VectorXd weights_;
  Eigen::VectorXd scaled_weights_;  // scale * weights
  Eigen::VectorXd update_;
};

SampledPath draw_path(const NodeModel& model, std::size_t num_features, std::uint64_t seed);

/// One independent path per node, node seeds derived from the master seed.
std::vector<NodeFunction> sample_network(std::span<const NodeModel> models, std::size_t num_features,
                                         std::uint64_t master_seed);

/// Debug dump: path evaluated along one input axis (others at the box
/// midpoint) as "z,value" CSV rows.
void write_path_csv(std::ostream& os, const SampledPath& path, std::span<const Interval> box,
                    std::size_t axis, std::size_t points);

}  // namespace mobons
