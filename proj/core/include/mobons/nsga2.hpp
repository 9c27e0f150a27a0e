#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "mobons/network.hpp"

namespace mobons {

struct NsgaConfig {
  std::size_t population_size = 100;
  std::size_t generations = 100;
  double crossover_probability = 0.9;
  double crossover_eta = 15.0;
  /// Negative means 1 / genome length.
  double mutation_probability = -1.0;
  double mutation_eta = 20.0;
  std::uint64_t seed = 1;
  /// Penalties at or below this count as feasible.
  double feasibility_tolerance = 1e-6;

  void validate() const;
};

/// Objectives (minimized) and a non-negative constraint penalty.
struct Evaluation {
  std::vector<double> objectives;
  double penalty = 0.0;
};

using MooProblem = std::function<Evaluation(std::span<const double> genome)>;

struct Individual {
  std::vector<double> genome;
  std::vector<double> objectives;
  double penalty = 0.0;
  std::size_t rank = 0;
  double crowding = 0.0;
};

struct NsgaResult {
  std::vector<Individual> population;
  /// Feasible nondominated set, or the lowest-penalty front if nothing is feasible.
  std::vector<Individual> front;
  bool feasible = false;
};

/// Called after each generation's survival step (generation 0 = initial population).
using GenerationObserver = std::function<void(std::size_t generation, std::span<const Individual> population)>;

/// a dominates b: a <= b everywhere and a < b somewhere (minimization).
bool dominates(std::span<const double> a, std::span<const double> b);

/// Fast nondominated sort. Front 0 is the nondominated set.
std::vector<std::vector<std::size_t>> nondominated_sort(const std::vector<std::vector<double>>& points);

/// Crowding distance within one front; boundary points per objective are infinite.
std::vector<double> crowding_distance(const std::vector<std::vector<double>>& front);

/// Elitist NSGA-II with feasibility-first (Deb) constraint handling, SBX
/// crossover and polynomial mutation. Deterministic for a fixed seed.
NsgaResult evolve(const MooProblem& problem, std::span<const Interval> bounds, const NsgaConfig& config,
                  const GenerationObserver& observer = {});

/// Writes "generation,rank,penalty,f0..,x0.." rows for a population.
void write_population_csv(std::ostream& os, std::size_t generation, std::span<const Individual> population,
                          bool header);

}  // namespace mobons
