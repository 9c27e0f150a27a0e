#pragma once

#include <cstddef>

namespace mobons::detail {

/// sum_i w[i] * cos(b[i] + sum_j W[j * L + i] * u[j]) for a column-major
/// L x d frequency matrix W. Built with vectorized cos; both the prior part
/// of a path and its data correction go through this one routine so paths
/// interpolate their training data consistently.
double rff_sum(const double* frequencies, const double* phases, const double* weights, const double* u,
               std::size_t num_features, std::size_t dim);

}  // namespace mobons::detail
