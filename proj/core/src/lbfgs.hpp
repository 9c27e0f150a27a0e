#pragma once

#include <functional>

#include <Eigen/Core>

namespace mobons::detail {

struct LbfgsOptions {
  int max_iterations = 100;
  int history = 7;
  double gradient_tolerance = 1e-6;
  double relative_tolerance = 1e-10;
};

struct LbfgsResult {
  Eigen::VectorXd x;
  double value = 0.0;
  int iterations = 0;
};

/// Objective returning f(x) and writing the gradient. May return +inf or
/// NaN to signal an infeasible point; the line search backs off.
using GradientObjective = std::function<double(const Eigen::VectorXd&, Eigen::VectorXd&)>;

/// Box-constrained L-BFGS: two-loop recursion on the free variables,
/// projected Armijo backtracking.
LbfgsResult minimize_box(const GradientObjective& f, Eigen::VectorXd x0, const Eigen::VectorXd& lower,
                         const Eigen::VectorXd& upper, const LbfgsOptions& options = {});

}  // namespace mobons::detail
