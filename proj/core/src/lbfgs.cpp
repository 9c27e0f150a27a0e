#include "lbfgs.hpp"

#include <cmath>
#include <deque>
#include <limits>

namespace mobons::detail {

namespace {

Eigen::VectorXd project(const Eigen::VectorXd& x, const Eigen::VectorXd& lo, const Eigen::VectorXd& hi) {
  return x.cwiseMax(lo).cwiseMin(hi);
}

// Variables pinned at a bound with the gradient pushing outward.
Eigen::ArrayXd free_mask(const Eigen::VectorXd& x, const Eigen::VectorXd& g, const Eigen::VectorXd& lo,
                         const Eigen::VectorXd& hi) {
  Eigen::ArrayXd mask = Eigen::ArrayXd::Ones(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if ((x[i] <= lo[i] && g[i] > 0.0) || (x[i] >= hi[i] && g[i] < 0.0)) mask[i] = 0.0;
  }
  return mask;
}

}  // namespace

LbfgsResult minimize_box(const GradientObjective& f, Eigen::VectorXd x0, const Eigen::VectorXd& lower,
                         const Eigen::VectorXd& upper, const LbfgsOptions& options) {
  const Eigen::Index n = x0.size();
  Eigen::VectorXd x = project(x0, lower, upper);
  Eigen::VectorXd g(n);
  double fx = f(x, g);

  LbfgsResult result{x, fx, 0};
  if (!std::isfinite(fx)) {
    result.value = std::numeric_limits<double>::infinity();
    return result;
  }

  std::deque<Eigen::VectorXd> s_hist, y_hist;
  Eigen::VectorXd g_new(n);
  for (int it = 0; it < options.max_iterations; ++it) {
    result.iterations = it + 1;
    const Eigen::ArrayXd mask = free_mask(x, g, lower, upper);
    const Eigen::VectorXd pg = (g.array() * mask).matrix();
    if (pg.lpNorm<Eigen::Infinity>() < options.gradient_tolerance) break;

    // two-loop recursion restricted to free variables
    Eigen::VectorXd q = pg;
    const auto m = s_hist.size();
    std::vector<double> alpha(m), rho(m);
    for (std::size_t i = m; i-- > 0;) {
      rho[i] = 1.0 / y_hist[i].dot(s_hist[i]);
      alpha[i] = rho[i] * s_hist[i].dot(q);
      q -= alpha[i] * y_hist[i];
    }
    if (m > 0) q *= s_hist.back().dot(y_hist.back()) / y_hist.back().squaredNorm();
    else q /= std::max(1.0, pg.norm());
    for (std::size_t i = 0; i < m; ++i) {
      const double beta = rho[i] * y_hist[i].dot(q);
      q += s_hist[i] * (alpha[i] - beta);
    }
    Eigen::VectorXd dir = -(q.array() * mask).matrix();
    if (dir.dot(pg) >= 0.0) {
      s_hist.clear();
      y_hist.clear();
      dir = -pg / std::max(1.0, pg.norm());
    }

    double step = 1.0;
    bool accepted = false;
    Eigen::VectorXd x_new;
    double f_new = 0.0;
    for (int ls = 0; ls < 40; ++ls) {
      x_new = project(x + step * dir, lower, upper);
      f_new = f(x_new, g_new);
      if (std::isfinite(f_new) && f_new <= fx + 1e-4 * g.dot(x_new - x)) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;

    const Eigen::VectorXd s = x_new - x;
    const Eigen::VectorXd y = g_new - g;
    const double rel = std::abs(fx - f_new) / std::max({std::abs(fx), std::abs(f_new), 1.0});
    x = x_new;
    g = g_new;
    fx = f_new;
    if (s.dot(y) > 1e-12 * s.norm() * y.norm()) {
      s_hist.push_back(s);
      y_hist.push_back(y);
      if (static_cast<int>(s_hist.size()) > options.history) {
        s_hist.pop_front();
        y_hist.pop_front();
      }
    }
    if (rel < options.relative_tolerance) break;
  }
  result.x = x;
  result.value = fx;
  return result;
}

}  // namespace mobons::detail
