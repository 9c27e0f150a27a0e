#include "mobons/sampler.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <random>

#include "mobons/rng.hpp"
#include "rff_kernel.hpp"

namespace mobons {

Eigen::VectorXd FeatureMap::features(const Eigen::Ref<const Eigen::VectorXd>& u) const {
  return scale * (frequencies * u + phases).array().cos().matrix();
}

double FeatureMap::approximate_kernel(const Eigen::Ref<const Eigen::VectorXd>& u,
                                      const Eigen::Ref<const Eigen::VectorXd>& up) const {
  return features(u).dot(features(up));
}

FeatureMap build_feature_map(const KernelSpec& kernel, std::size_t num_features, std::uint64_t seed) {
  kernel.validate();
  if (num_features < 1) throw std::invalid_argument("num_features must be >= 1");
  const auto l = static_cast<Eigen::Index>(num_features);
  const auto d = static_cast<Eigen::Index>(kernel.input_dim());

  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::chi_squared_distribution<double> chi2(5.0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);

  FeatureMap map;
  map.frequencies.resize(l, d);
  map.phases.resize(l);
  for (Eigen::Index i = 0; i < l; ++i) {
    double t_scale = 1.0;
    if (kernel.family == KernelFamily::Matern52) t_scale = std::sqrt(5.0 / chi2(rng));
    for (Eigen::Index j = 0; j < d; ++j) map.frequencies(i, j) = normal(rng) * t_scale / kernel.lengthscales[j];
    map.phases[i] = phase(rng);
  }
  map.scale = std::sqrt(2.0 * kernel.signal_variance / static_cast<double>(num_features));
  return map;
}

SampledPath SampledPath::from_gp(const PosteriorGP& gp, std::size_t num_features, std::uint64_t seed) {
  SampledPath path;
  path.gp_ = std::make_shared<const PosteriorGP>(gp);
  path.features_ = build_feature_map(gp.kernel(), num_features, mix_seed(seed, "features"));

  Rng rng(mix_seed(seed, "weights"));
  std::normal_distribution<double> normal(0.0, 1.0);
  path.weights_.resize(static_cast<Eigen::Index>(num_features));
  for (Eigen::Index i = 0; i < path.weights_.size(); ++i) path.weights_[i] = normal(rng);
  path.scaled_weights_ = path.features_.scale * path.weights_;

  const auto n = static_cast<Eigen::Index>(gp.size());
  if (n > 0) {
    const auto& u = gp.training_inputs();
    Eigen::VectorXd prior_at_data(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const Eigen::VectorXd ui = u.row(i).transpose();
      prior_at_data[i] = path.prior(ui.data());
    }
    const Eigen::VectorXd residual = (gp.training_targets().array() - gp.constant_mean()).matrix() - prior_at_data;
    path.update_ = gp.factor().solve(residual);
    // The training factor carries a numerical jitter; one refinement step against the
    // noiseless system keeps draws on the data.
    path.update_ += gp.factor().solve(gp.jitter() * path.update_);
  }
  return path;
}

double SampledPath::prior(const double* u) const {
  return detail::rff_sum(features_.frequencies.data(), features_.phases.data(), scaled_weights_.data(), u,
                         features_.size(), static_cast<std::size_t>(features_.frequencies.cols()));
}

SampledPath SampledPath::exact(NodeFunction f) {
  SampledPath path;
  path.exact_ = std::move(f);
  return path;
}

double SampledPath::operator()(std::span<const double> z) const {
  if (exact_) return exact_(z);
  const auto& gp = *gp_;
  const Eigen::VectorXd u = gp.standardize(z);
  double v = gp.constant_mean() + prior(u.data());
  if (update_.size() > 0) v += kernel_vector(gp.kernel(), gp.training_inputs(), u).dot(update_);
  const auto& s = gp.standardization();
  return s.output_mean + s.output_scale * v;
}

SampledPath draw_path(const NodeModel& model, std::size_t num_features, std::uint64_t seed) {
  if (const auto* wb = std::get_if<WhiteBoxModel>(&model)) return SampledPath::exact(wb->function());
  return SampledPath::from_gp(std::get<PosteriorGP>(model), num_features, seed);
}

std::vector<NodeFunction> sample_network(std::span<const NodeModel> models, std::size_t num_features,
                                         std::uint64_t master_seed) {
  std::vector<NodeFunction> out;
  out.reserve(models.size());
  for (std::size_t k = 0; k < models.size(); ++k) {
    auto path = std::make_shared<const SampledPath>(draw_path(models[k], num_features, mix_seed(master_seed, k)));
    out.push_back([path](std::span<const double> z) { return (*path)(z); });
  }
  return out;
}

void write_path_csv(std::ostream& os, const SampledPath& path, std::span<const Interval> box, std::size_t axis,
                    std::size_t points) {
  if (axis >= box.size()) throw std::invalid_argument("axis out of range");
  if (points < 2) throw std::invalid_argument("need at least 2 grid points");
  std::vector<double> z(box.size());
  for (std::size_t d = 0; d < box.size(); ++d) z[d] = box[d].midpoint();
  os << "z,value\n";
  for (std::size_t i = 0; i < points; ++i) {
    z[axis] = box[axis].lower + box[axis].width() * static_cast<double>(i) / static_cast<double>(points - 1);
    os << z[axis] << ',' << path(z) << '\n';
  }
}

}  // namespace mobons
