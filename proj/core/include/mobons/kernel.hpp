#pragma once

#include <span>
#include <string>

#include <Eigen/Core>

namespace mobons {

enum class KernelFamily { RBF, Matern52 };

std::string to_string(KernelFamily family);
KernelFamily kernel_family_from_string(const std::string& name);

/// Stationary ARD kernel. jitter is added to the training diagonal only.
struct KernelSpec {
  KernelFamily family = KernelFamily::Matern52;
  Eigen::VectorXd lengthscales;
  double signal_variance = 1.0;
  double jitter = 1e-8;

  std::size_t input_dim() const { return static_cast<std::size_t>(lengthscales.size()); }
  void validate() const;
};

/// RBF:       s2 * exp(-r^2 / 2)
/// Matern5/2: s2 * (1 + sqrt5 r + 5 r^2 / 3) * exp(-sqrt5 r)
/// with r^2 = sum_d (z_d - z'_d)^2 / l_d^2.
double kernel_eval(const KernelSpec& spec, std::span<const double> z, std::span<const double> zp);

namespace detail {

/// Kernel value as a function of the squared scaled distance.
inline double kernel_from_r2(KernelFamily family, double signal_variance, double r2);

}  // namespace detail

/// Gram matrix between row-major point sets (rows are points).
Eigen::MatrixXd kernel_matrix(const KernelSpec& spec, const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);
Eigen::VectorXd kernel_vector(const KernelSpec& spec, const Eigen::MatrixXd& points,
                              const Eigen::Ref<const Eigen::VectorXd>& z);

}  // namespace mobons

#include "mobons/kernel_inl.hpp"
