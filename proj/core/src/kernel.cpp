#include "mobons/kernel.hpp"

#include <stdexcept>

namespace mobons {

std::string to_string(KernelFamily family) {
  return family == KernelFamily::RBF ? "rbf" : "matern52";
}

KernelFamily kernel_family_from_string(const std::string& name) {
  if (name == "rbf" || name == "RBF") return KernelFamily::RBF;
  if (name == "matern52" || name == "matern-5/2" || name == "Matern52") return KernelFamily::Matern52;
  throw std::invalid_argument("unknown kernel family '" + name + "'");
}

void KernelSpec::validate() const {
  if (lengthscales.size() == 0) throw std::invalid_argument("kernel needs at least one lengthscale");
  if ((lengthscales.array() <= 0.0).any()) throw std::invalid_argument("lengthscales must be > 0");
  if (!(signal_variance > 0.0)) throw std::invalid_argument("signal variance must be > 0");
  if (!(jitter >= 0.0)) throw std::invalid_argument("jitter must be >= 0");
}

double kernel_eval(const KernelSpec& spec, std::span<const double> z, std::span<const double> zp) {
  const auto d = spec.input_dim();
  if (z.size() != d || zp.size() != d)
    throw std::invalid_argument("kernel_eval: input dimension does not match lengthscales");
  double r2 = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    const double u = (z[i] - zp[i]) / spec.lengthscales[static_cast<Eigen::Index>(i)];
    r2 += u * u;
  }
  return detail::kernel_from_r2(spec.family, spec.signal_variance, r2);
}

Eigen::MatrixXd kernel_matrix(const KernelSpec& spec, const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.cols() != spec.lengthscales.size() || b.cols() != spec.lengthscales.size())
    throw std::invalid_argument("kernel_matrix: input dimension does not match lengthscales");
  const Eigen::RowVectorXd inv_l = spec.lengthscales.cwiseInverse().transpose();
  const Eigen::MatrixXd as = a.array().rowwise() * inv_l.array();
  const Eigen::MatrixXd bs = b.array().rowwise() * inv_l.array();
  Eigen::MatrixXd k(a.rows(), b.rows());
  for (Eigen::Index j = 0; j < b.rows(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      k(i, j) = detail::kernel_from_r2(spec.family, spec.signal_variance,
                                       (as.row(i) - bs.row(j)).squaredNorm());
  return k;
}

Eigen::VectorXd kernel_vector(const KernelSpec& spec, const Eigen::MatrixXd& points,
                              const Eigen::Ref<const Eigen::VectorXd>& z) {
  Eigen::VectorXd k(points.rows());
  const Eigen::Index d = z.size();
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    double r2 = 0.0;
    for (Eigen::Index j = 0; j < d; ++j) {
      const double u = (points(i, j) - z[j]) / spec.lengthscales[j];
      r2 += u * u;
    }
    k[i] = detail::kernel_from_r2(spec.family, spec.signal_variance, r2);
  }
  return k;
}

}  // namespace mobons
