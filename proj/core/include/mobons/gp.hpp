#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "mobons/kernel.hpp"
#include "mobons/network.hpp"

namespace mobons {

/// History of (node input, scalar output) pairs for one node.
class NodeDataset {
 public:
  explicit NodeDataset(std::size_t input_dim = 0) : input_dim_(input_dim) {}

  void add(std::span<const double> z, double y);
  std::size_t size() const { return outputs_.size(); }
  bool empty() const { return outputs_.empty(); }
  std::size_t input_dim() const { return input_dim_; }
  const std::vector<std::vector<double>>& inputs() const { return inputs_; }
  const std::vector<double>& outputs() const { return outputs_; }

  /// Finite entries, no exact-duplicate input with a differing output.
  void validate() const;

 private:
  std::size_t input_dim_;
  std::vector<std::vector<double>> inputs_;
  std::vector<double> outputs_;
};

/// Inputs are mapped to [0,1] with the node's input box, outputs to zero
/// mean and unit variance. Kernel hyperparameters live in that space.
struct Standardization {
  Eigen::VectorXd input_lower;
  Eigen::VectorXd input_scale;
  double output_mean = 0.0;
  double output_scale = 1.0;

  static Standardization from(std::span<const Interval> input_box, const NodeDataset& data);
  Eigen::VectorXd input(std::span<const double> z) const;
};

class FactorizationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GpHyperparameters {
  KernelSpec kernel;  // standardized coordinates
  double mean = 0.0;  // constant prior mean, standardized
  double log_likelihood = 0.0;
};

struct GpFitOptions {
  KernelFamily family = KernelFamily::Matern52;
  int restarts = 3;
  std::uint64_t seed = 0;
  double jitter = 1e-8;
  double max_jitter = 1e-4;
  Interval lengthscale_bounds{5e-3, 20.0};
  Interval signal_variance_bounds{1e-6, 1e2};
  Interval mean_bounds{-5.0, 5.0};
  int max_iterations = 100;
};

/// Exact GP posterior for one node, noiseless observations with jitter.
/// Immutable once built; const methods are safe to call concurrently.
class PosteriorGP {
 public:
  PosteriorGP(NodeDataset data, std::vector<Interval> input_box, KernelSpec kernel, double mean);
  PosteriorGP(NodeDataset data, std::vector<Interval> input_box, Standardization standardization,
              KernelSpec kernel, double mean);

  std::size_t input_dim() const { return kernel_.input_dim(); }
  std::size_t size() const { return data_.size(); }

  double mean(std::span<const double> z) const;
  double variance(std::span<const double> z) const;
  std::pair<double, double> predict(std::span<const double> z) const;
  double covariance(std::span<const double> a, std::span<const double> b) const;
  Eigen::MatrixXd covariance_matrix(const std::vector<std::vector<double>>& points) const;

  /// zeta^2 in output units.
  double prior_variance() const;
  double prior_mean() const;
  /// Lengthscales mapped back to the node's input units.
  Eigen::VectorXd lengthscales() const;
  double log_marginal_likelihood() const;

  /// Same hyperparameters conditioned on a different dataset.
  PosteriorGP with_dataset(NodeDataset data) const;

  const KernelSpec& kernel() const { return kernel_; }
  double constant_mean() const { return mean_; }
  double jitter() const { return kernel_.jitter; }
  GpHyperparameters hyperparameters() const { return {kernel_, mean_, log_marginal_likelihood()}; }
  const Standardization& standardization() const { return standardization_; }
  const NodeDataset& dataset() const { return data_; }
  const std::vector<Interval>& input_box() const { return input_box_; }

  // Standardized-space internals used by the pathwise sampler.
  const Eigen::MatrixXd& training_inputs() const { return inputs_; }
  const Eigen::VectorXd& training_targets() const { return targets_; }
  const Eigen::VectorXd& alpha() const { return alpha_; }
  const Eigen::LLT<Eigen::MatrixXd>& factor() const { return llt_; }
  Eigen::VectorXd standardize(std::span<const double> z) const;
  double standardized_mean(const Eigen::Ref<const Eigen::VectorXd>& u) const;

 private:
  void factorize();
  void check_dim(std::span<const double> z) const;

  NodeDataset data_;
  std::vector<Interval> input_box_;
  Standardization standardization_;
  KernelSpec kernel_;
  double mean_;
  Eigen::MatrixXd inputs_;
  Eigen::VectorXd targets_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  Eigen::VectorXd alpha_;
};

/// Exact log marginal likelihood in standardized space. When gradient is
/// non-null it receives d/d[log l_1..log l_D, log s2, mean]. The jitter is
/// escalated x10 up to max_jitter on factorization failure; returns -inf if
/// that is not enough.
double log_marginal_likelihood(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets,
                               const KernelSpec& kernel, double mean, Eigen::VectorXd* gradient = nullptr,
                               double max_jitter = 1e-4);

/// Multi-start L-BFGS maximization of the log marginal likelihood over
/// log-lengthscales, log signal variance and the constant mean.
GpHyperparameters fit_hyperparameters(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets,
                                      const GpFitOptions& options,
                                      const GpHyperparameters* warm_start = nullptr);

PosteriorGP fit_gp(NodeDataset data, std::vector<Interval> input_box, const GpFitOptions& options,
                   const GpHyperparameters* warm_start = nullptr);

std::string serialize_gp(const PosteriorGP& gp);
PosteriorGP deserialize_gp(const std::string& text);

}  // namespace mobons
