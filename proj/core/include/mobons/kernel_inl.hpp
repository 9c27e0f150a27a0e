#pragma once

#include <cmath>

namespace mobons::detail {

inline double kernel_from_r2(KernelFamily family, double signal_variance, double r2) {
  if (family == KernelFamily::RBF) return signal_variance * std::exp(-0.5 * r2);
  constexpr double sqrt5 = 2.23606797749978969641;
  const double r = std::sqrt(r2);
  return signal_variance * (1.0 + sqrt5 * r + (5.0 / 3.0) * r2) * std::exp(-sqrt5 * r);
}

}  // namespace mobons::detail
