#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mobons/gp.hpp"
#include "mobons/network.hpp"
#include "mobons/node_model.hpp"

namespace mobons {

/// Vector response of a design; nullopt marks a failed evaluation.
using VectorResponse = std::function<std::optional<std::vector<double>>(std::span<const double> x)>;

struct SobolResult {
  std::size_t variables = 0;
  std::size_t objectives = 0;
  /// [objective][variable], clamped to [0, 1]
  std::vector<std::vector<double>> indices;
  std::vector<std::vector<double>> raw_indices;
  std::vector<std::vector<double>> standard_errors;
  std::size_t samples = 0;
  std::size_t failures = 0;
  std::vector<Interval> box;
};

/// First-order Sobol indices by the Saltelli pick-freeze estimator under
/// independent uniform inputs on the box. Throws when more than
/// max_failure_fraction of the evaluations fail.
SobolResult saltelli_first_order(const VectorResponse& response, std::span<const Interval> box,
                                 std::size_t samples, std::uint64_t seed, double max_failure_fraction = 0.1);

/// center +/- relative * (box width), clipped to the design box.
std::vector<Interval> local_box(std::span<const Interval> design_box, std::span<const double> center,
                                double relative);

struct LocalSobolOptions {
  double relative_box = 0.05;
  std::size_t extra_evals = 24;
  std::size_t samples = 8192;
  std::uint64_t seed = 0;
  FixedPointOptions fixed_point;
  GpFitOptions fit;
};

/// Local sensitivity around a design: adds extra_evals Latin-hypercube
/// true-network evaluations in the local box to the node datasets, refits
/// the black-box surrogates in place, then estimates first-order indices of
/// every objective on the posterior-mean network.
SobolResult local_sobol(const FunctionNetwork& net, std::vector<NodeModel>& models,
                        std::span<const NodeFunction> true_evaluators, std::span<const double> center,
                        const LocalSobolOptions& options);

/// variable,objective,index,standard_error
void write_sobol_csv(std::ostream& os, const SobolResult& result);

}  // namespace mobons
