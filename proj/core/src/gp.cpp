#include "mobons/gp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "lbfgs.hpp"
#include "mobons/rng.hpp"

namespace mobons {

void NodeDataset::add(std::span<const double> z, double y) {
  if (inputs_.empty() && input_dim_ == 0) input_dim_ = z.size();
  if (z.size() != input_dim_)
    throw std::invalid_argument("dataset input has dimension " + std::to_string(z.size()) + ", expected " +
                                std::to_string(input_dim_));
  inputs_.emplace_back(z.begin(), z.end());
  outputs_.push_back(y);
}

void NodeDataset::validate() const {
  if (inputs_.size() != outputs_.size()) throw std::invalid_argument("dataset inputs/outputs differ in length");
  for (std::size_t i = 0; i < inputs_.size(); ++i) {
    if (!std::isfinite(outputs_[i])) throw std::invalid_argument("dataset output is not finite");
    for (double v : inputs_[i])
      if (!std::isfinite(v)) throw std::invalid_argument("dataset input is not finite");
  }
  for (std::size_t i = 0; i < inputs_.size(); ++i)
    for (std::size_t j = i + 1; j < inputs_.size(); ++j)
      if (inputs_[i] == inputs_[j] && outputs_[i] != outputs_[j])
        throw std::invalid_argument("dataset has duplicate inputs with different outputs");
}

Standardization Standardization::from(std::span<const Interval> input_box, const NodeDataset& data) {
  Standardization s;
  const auto d = static_cast<Eigen::Index>(input_box.size());
  s.input_lower.resize(d);
  s.input_scale.resize(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    s.input_lower[i] = input_box[static_cast<std::size_t>(i)].lower;
    s.input_scale[i] = input_box[static_cast<std::size_t>(i)].width();
  }
  const auto& y = data.outputs();
  if (!y.empty()) {
    double mean = 0.0;
    for (double v : y) mean += v;
    mean /= static_cast<double>(y.size());
    double var = 0.0;
    for (double v : y) var += (v - mean) * (v - mean);
    var /= static_cast<double>(y.size());
    s.output_mean = mean;
    const double sd = std::sqrt(var);
    s.output_scale = sd > 1e-12 * std::max(1.0, std::abs(mean)) ? sd : 1.0;
  }
  return s;
}

Eigen::VectorXd Standardization::input(std::span<const double> z) const {
  Eigen::Map<const Eigen::VectorXd> zm(z.data(), static_cast<Eigen::Index>(z.size()));
  return ((zm - input_lower).array() / input_scale.array()).matrix();
}

namespace {

// Cholesky of K + jitter I, escalating the jitter x10 until it factorizes.
bool factorize_with_jitter(const Eigen::MatrixXd& k_base, double& jitter, double max_jitter,
                           Eigen::LLT<Eigen::MatrixXd>& llt) {
  const Eigen::Index n = k_base.rows();
  for (double j = jitter;; j *= 10.0) {
    Eigen::MatrixXd k = k_base;
    k.diagonal().array() += j;
    llt.compute(k);
    if (llt.info() == Eigen::Success) {
      bool ok = true;
      for (Eigen::Index i = 0; i < n && ok; ++i) ok = llt.matrixLLT()(i, i) > 0.0;
      if (ok) {
        jitter = j;
        return true;
      }
    }
    if (j >= max_jitter || j == 0.0) {
      if (j == 0.0) {
        j = 1e-12;  // zero jitter requested: start escalating from a tiny value
        continue;
      }
      return false;
    }
  }
}

}  // namespace

PosteriorGP::PosteriorGP(NodeDataset data, std::vector<Interval> input_box, KernelSpec kernel, double mean)
    : PosteriorGP(data, input_box, Standardization::from(input_box, data), std::move(kernel), mean) {}

PosteriorGP::PosteriorGP(NodeDataset data, std::vector<Interval> input_box, Standardization standardization,
                         KernelSpec kernel, double mean)
    : data_(std::move(data)),
      input_box_(std::move(input_box)),
      standardization_(std::move(standardization)),
      kernel_(std::move(kernel)),
      mean_(mean) {
  kernel_.validate();
  if (input_box_.size() != kernel_.input_dim())
    throw std::invalid_argument("input box dimension does not match kernel lengthscales");
  if (!data_.empty() && data_.input_dim() != kernel_.input_dim())
    throw std::invalid_argument("dataset dimension does not match kernel lengthscales");
  data_.validate();
  factorize();
}

void PosteriorGP::factorize() {
  const auto n = static_cast<Eigen::Index>(data_.size());
  const auto d = static_cast<Eigen::Index>(kernel_.input_dim());
  inputs_.resize(n, d);
  targets_.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    inputs_.row(i) = standardization_.input(data_.inputs()[static_cast<std::size_t>(i)]).transpose();
    targets_[i] = (data_.outputs()[static_cast<std::size_t>(i)] - standardization_.output_mean) /
                  standardization_.output_scale;
  }
  if (n == 0) {
    alpha_.resize(0);
    return;
  }
  const Eigen::MatrixXd k = kernel_matrix(kernel_, inputs_, inputs_);
  double jitter = kernel_.jitter;
  if (!factorize_with_jitter(k, jitter, std::max(1e-4, kernel_.jitter), llt_))
    throw FactorizationError("training covariance is not positive definite after jitter escalation");
  kernel_.jitter = jitter;
  alpha_ = llt_.solve((targets_.array() - mean_).matrix());
}

void PosteriorGP::check_dim(std::span<const double> z) const {
  if (z.size() != input_dim())
    throw std::invalid_argument("GP input has dimension " + std::to_string(z.size()) + ", expected " +
                                std::to_string(input_dim()));
}

Eigen::VectorXd PosteriorGP::standardize(std::span<const double> z) const {
  check_dim(z);
  return standardization_.input(z);
}

double PosteriorGP::standardized_mean(const Eigen::Ref<const Eigen::VectorXd>& u) const {
  if (size() == 0) return mean_;
  return mean_ + kernel_vector(kernel_, inputs_, u).dot(alpha_);
}

double PosteriorGP::mean(std::span<const double> z) const {
  const auto u = standardize(z);
  return standardization_.output_mean + standardization_.output_scale * standardized_mean(u);
}

double PosteriorGP::variance(std::span<const double> z) const { return predict(z).second; }

std::pair<double, double> PosteriorGP::predict(std::span<const double> z) const {
  const auto u = standardize(z);
  const double s = standardization_.output_scale;
  if (size() == 0) return {standardization_.output_mean + s * mean_, s * s * kernel_.signal_variance};
  const Eigen::VectorXd kx = kernel_vector(kernel_, inputs_, u);
  const double m = mean_ + kx.dot(alpha_);
  const Eigen::VectorXd v = llt_.matrixL().solve(kx);
  const double var = std::max(0.0, kernel_.signal_variance - v.squaredNorm());
  return {standardization_.output_mean + s * m, s * s * var};
}

double PosteriorGP::covariance(std::span<const double> a, std::span<const double> b) const {
  const auto ua = standardize(a);
  const auto ub = standardize(b);
  const double s2 = standardization_.output_scale * standardization_.output_scale;
  double r2 = 0.0;
  for (Eigen::Index i = 0; i < ua.size(); ++i) {
    const double t = (ua[i] - ub[i]) / kernel_.lengthscales[i];
    r2 += t * t;
  }
  double prior = detail::kernel_from_r2(kernel_.family, kernel_.signal_variance, r2);
  if (size() == 0) return s2 * prior;
  const Eigen::VectorXd va = llt_.matrixL().solve(kernel_vector(kernel_, inputs_, ua));
  const Eigen::VectorXd vb = llt_.matrixL().solve(kernel_vector(kernel_, inputs_, ub));
  return s2 * (prior - va.dot(vb));
}

Eigen::MatrixXd PosteriorGP::covariance_matrix(const std::vector<std::vector<double>>& points) const {
  const auto m = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXd u(m, static_cast<Eigen::Index>(input_dim()));
  for (Eigen::Index i = 0; i < m; ++i) u.row(i) = standardize(points[static_cast<std::size_t>(i)]).transpose();
  Eigen::MatrixXd cov = kernel_matrix(kernel_, u, u);
  if (size() > 0) {
    const Eigen::MatrixXd v = llt_.matrixL().solve(kernel_matrix(kernel_, inputs_, u));
    cov -= v.transpose() * v;
  }
  const double s2 = standardization_.output_scale * standardization_.output_scale;
  return s2 * 0.5 * (cov + cov.transpose());
}

double PosteriorGP::prior_variance() const {
  return standardization_.output_scale * standardization_.output_scale * kernel_.signal_variance;
}

double PosteriorGP::prior_mean() const {
  return standardization_.output_mean + standardization_.output_scale * mean_;
}

Eigen::VectorXd PosteriorGP::lengthscales() const {
  return (kernel_.lengthscales.array() * standardization_.input_scale.array()).matrix();
}

double PosteriorGP::log_marginal_likelihood() const {
  if (size() == 0) return 0.0;
  const Eigen::VectorXd r = (targets_.array() - mean_).matrix();
  const double logdet = 2.0 * llt_.matrixLLT().diagonal().array().log().sum();
  return -0.5 * r.dot(alpha_) - 0.5 * logdet -
         0.5 * static_cast<double>(size()) * std::log(2.0 * std::numbers::pi);
}

PosteriorGP PosteriorGP::with_dataset(NodeDataset data) const {
  KernelSpec k = kernel_;
  return PosteriorGP(std::move(data), input_box_, std::move(k), mean_);
}

double log_marginal_likelihood(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets,
                               const KernelSpec& kernel, double mean, Eigen::VectorXd* gradient,
                               double max_jitter) {
  const Eigen::Index n = inputs.rows();
  const Eigen::Index d = inputs.cols();
  if (targets.size() != n) throw std::invalid_argument("targets length does not match inputs");
  if (kernel.lengthscales.size() != d) throw std::invalid_argument("lengthscales do not match inputs");

  const Eigen::MatrixXd k = kernel_matrix(kernel, inputs, inputs);
  Eigen::LLT<Eigen::MatrixXd> llt;
  double jitter = kernel.jitter;
  if (!factorize_with_jitter(k, jitter, max_jitter, llt)) return -std::numeric_limits<double>::infinity();

  const Eigen::VectorXd r = (targets.array() - mean).matrix();
  const Eigen::VectorXd alpha = llt.solve(r);
  const double logdet = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
  const double mll = -0.5 * r.dot(alpha) - 0.5 * logdet - 0.5 * static_cast<double>(n) * std::log(2.0 * std::numbers::pi);

  if (gradient) {
    gradient->resize(d + 2);
    const Eigen::MatrixXd kinv = llt.solve(Eigen::MatrixXd::Identity(n, n));
    const Eigen::MatrixXd w = alpha * alpha.transpose() - kinv;
    constexpr double sqrt5 = 2.23606797749978969641;
    // dk/dlog l_d = factor(r) * diff_d^2 / l_d^2
    Eigen::VectorXd g_len = Eigen::VectorXd::Zero(d);
    Eigen::VectorXd diff2(d);
    for (Eigen::Index j = 0; j < n; ++j) {
      for (Eigen::Index i = 0; i < n; ++i) {
        if (i == j) continue;
        double r2 = 0.0;
        for (Eigen::Index c = 0; c < d; ++c) {
          const double t = (inputs(i, c) - inputs(j, c)) / kernel.lengthscales[c];
          diff2[c] = t * t;
          r2 += diff2[c];
        }
        double factor;
        if (kernel.family == KernelFamily::RBF) {
          factor = kernel.signal_variance * std::exp(-0.5 * r2);
        } else {
          const double rr = std::sqrt(r2);
          factor = kernel.signal_variance * (5.0 / 3.0) * (1.0 + sqrt5 * rr) * std::exp(-sqrt5 * rr);
        }
        g_len += (w(i, j) * factor) * diff2;
      }
    }
    gradient->head(d) = 0.5 * g_len;
    (*gradient)[d] = 0.5 * (w.array() * k.array()).sum();
    (*gradient)[d + 1] = alpha.sum();
  }
  return mll;
}

GpHyperparameters fit_hyperparameters(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets,
                                      const GpFitOptions& options, const GpHyperparameters* warm_start) {
  if (inputs.rows() < 2) throw std::invalid_argument("fit_hyperparameters needs at least 2 observations");
  if (options.restarts < 1) throw std::invalid_argument("restarts must be >= 1");
  const Eigen::Index d = inputs.cols();
  const Eigen::Index p = d + 2;

  Eigen::VectorXd lower(p), upper(p);
  lower.head(d).setConstant(std::log(options.lengthscale_bounds.lower));
  upper.head(d).setConstant(std::log(options.lengthscale_bounds.upper));
  lower[d] = std::log(options.signal_variance_bounds.lower);
  upper[d] = std::log(options.signal_variance_bounds.upper);
  lower[d + 1] = options.mean_bounds.lower;
  upper[d + 1] = options.mean_bounds.upper;

  auto unpack = [&](const Eigen::VectorXd& theta) {
    KernelSpec k;
    k.family = options.family;
    k.lengthscales = theta.head(d).array().exp().matrix();
    k.signal_variance = std::exp(theta[d]);
    k.jitter = options.jitter;
    return k;
  };

  detail::GradientObjective objective = [&](const Eigen::VectorXd& theta, Eigen::VectorXd& grad) {
    Eigen::VectorXd g;
    const double mll = log_marginal_likelihood(inputs, targets, unpack(theta), theta[d + 1], &g,
                                               options.max_jitter);
    if (!std::isfinite(mll)) return std::numeric_limits<double>::infinity();
    grad = -g;
    return -mll;
  };

  std::vector<Eigen::VectorXd> starts;
  if (warm_start && warm_start->kernel.lengthscales.size() == d) {
    Eigen::VectorXd t(p);
    t.head(d) = warm_start->kernel.lengthscales.array().log().matrix();
    t[d] = std::log(warm_start->kernel.signal_variance);
    t[d + 1] = warm_start->mean;
    starts.push_back(t);
  } else {
    Eigen::VectorXd t(p);
    t.head(d).setConstant(std::log(0.3));
    t[d] = 0.0;
    t[d + 1] = 0.0;
    starts.push_back(t);
  }
  Rng rng(options.seed);
  std::uniform_real_distribution<double> log_len(std::log(0.02), std::log(2.0));
  std::uniform_real_distribution<double> log_sig(std::log(0.2), std::log(5.0));
  while (static_cast<int>(starts.size()) < options.restarts) {
    Eigen::VectorXd t(p);
    for (Eigen::Index i = 0; i < d; ++i) t[i] = log_len(rng);
    t[d] = log_sig(rng);
    t[d + 1] = 0.0;
    starts.push_back(t);
  }

  detail::LbfgsOptions lbfgs;
  lbfgs.max_iterations = options.max_iterations;
  std::optional<detail::LbfgsResult> best;
  for (const auto& s : starts) {
    auto res = detail::minimize_box(objective, s, lower, upper, lbfgs);
    if (!std::isfinite(res.value)) continue;
    if (!best || res.value < best->value) best = std::move(res);
  }
  if (!best) {
    std::ostringstream msg;
    msg << "GP hyperparameter fit failed: all " << starts.size() << " starts were numerically infeasible (n="
        << inputs.rows() << ", d=" << d << ")";
    throw FactorizationError(msg.str());
  }

  GpHyperparameters out;
  out.kernel = unpack(best->x);
  out.mean = best->x[d + 1];
  out.log_likelihood = -best->value;
  return out;
}

PosteriorGP fit_gp(NodeDataset data, std::vector<Interval> input_box, const GpFitOptions& options,
                   const GpHyperparameters* warm_start) {
  data.validate();
  auto standardization = Standardization::from(input_box, data);
  if (data.size() < 2) {
    KernelSpec k;
    if (warm_start) {
      k = warm_start->kernel;
    } else {
      k.family = options.family;
      k.lengthscales = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(input_box.size()), 0.3);
      k.signal_variance = 1.0;
    }
    k.jitter = options.jitter;
    return PosteriorGP(std::move(data), std::move(input_box), std::move(standardization), std::move(k),
                       warm_start ? warm_start->mean : 0.0);
  }
  const auto n = static_cast<Eigen::Index>(data.size());
  const auto d = static_cast<Eigen::Index>(input_box.size());
  Eigen::MatrixXd u(n, d);
  Eigen::VectorXd t(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    u.row(i) = standardization.input(data.inputs()[static_cast<std::size_t>(i)]).transpose();
    t[i] = (data.outputs()[static_cast<std::size_t>(i)] - standardization.output_mean) / standardization.output_scale;
  }
  auto hp = fit_hyperparameters(u, t, options, warm_start);
  hp.kernel.jitter = options.jitter;
  return PosteriorGP(std::move(data), std::move(input_box), std::move(standardization), std::move(hp.kernel),
                     hp.mean);
}

}  // namespace mobons
