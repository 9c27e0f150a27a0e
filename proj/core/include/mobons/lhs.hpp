#pragma once

#include <span>
#include <vector>

#include "mobons/network.hpp"
#include "mobons/rng.hpp"

namespace mobons {

/// n Latin-hypercube points in a box: each dimension's n values occupy
/// distinct 1/n-width strata, uniformly placed within their stratum.
std::vector<std::vector<double>> latin_hypercube(std::size_t n, std::span<const Interval> box, Rng& rng);

std::vector<double> uniform_point(std::span<const Interval> box, Rng& rng);

}  // namespace mobons
