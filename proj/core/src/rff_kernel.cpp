#include "rff_kernel.hpp"

#include <cmath>

namespace mobons::detail {

#if defined(__x86_64__) && defined(__GNUC__) && !defined(__clang__)
#define MOBONS_TARGET_CLONES __attribute__((target_clones("avx2", "default")))
#else
#define MOBONS_TARGET_CLONES
#endif

MOBONS_TARGET_CLONES
double rff_sum(const double* frequencies, const double* phases, const double* weights, const double* u,
               std::size_t num_features, std::size_t dim) {
  constexpr std::size_t block = 256;
  double arg[block];
  double acc = 0.0;
  for (std::size_t s = 0; s < num_features; s += block) {
    const std::size_t n = num_features - s < block ? num_features - s : block;
#pragma omp simd
    for (std::size_t i = 0; i < n; ++i) arg[i] = phases[s + i];
    for (std::size_t j = 0; j < dim; ++j) {
      const double uj = u[j];
      const double* col = frequencies + j * num_features + s;
#pragma omp simd
      for (std::size_t i = 0; i < n; ++i) arg[i] += col[i] * uj;
    }
#pragma omp simd reduction(+ : acc)
    for (std::size_t i = 0; i < n; ++i) acc += weights[s + i] * std::cos(arg[i]);
  }
  return acc;
}

}  // namespace mobons::detail
