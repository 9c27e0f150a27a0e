#include "mobons/lhs.hpp"

#include <algorithm>
#include <numeric>

namespace mobons {

std::vector<std::vector<double>> latin_hypercube(std::size_t n, std::span<const Interval> box, Rng& rng) {
  std::vector<std::vector<double>> points(n, std::vector<double>(box.size()));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::size_t> strata(n);
  for (std::size_t d = 0; d < box.size(); ++d) {
    std::iota(strata.begin(), strata.end(), 0);
    std::shuffle(strata.begin(), strata.end(), rng);
    for (std::size_t i = 0; i < n; ++i) {
      const double u = (static_cast<double>(strata[i]) + unit(rng)) / static_cast<double>(n);
      points[i][d] = box[d].lower + u * box[d].width();
    }
  }
  return points;
}

std::vector<double> uniform_point(std::span<const Interval> box, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> x(box.size());
  for (std::size_t d = 0; d < box.size(); ++d) x[d] = box[d].lower + unit(rng) * box[d].width();
  return x;
}

}  // namespace mobons
