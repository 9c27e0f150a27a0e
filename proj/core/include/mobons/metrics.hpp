#pragma once

#include <span>
#include <vector>

namespace mobons {

/// Indices of the nondominated points (minimization), in input order.
std::vector<std::size_t> pareto_filter(const std::vector<std::vector<double>>& points);

/// Lebesgue measure of the region dominated by the points and bounded by
/// the reference point. Points that do not dominate the reference are
/// excluded. Exact for M = 2 (sweep) and M = 3 (slicing); throws
/// std::invalid_argument otherwise.
double hypervolume(const std::vector<std::vector<double>>& points, std::span<const double> reference);

}  // namespace mobons
