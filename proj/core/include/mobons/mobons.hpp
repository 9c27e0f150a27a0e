#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "mobons/archive.hpp"
#include "mobons/gp.hpp"
#include "mobons/network.hpp"
#include "mobons/node_model.hpp"
#include "mobons/nsga2.hpp"

namespace mobons {

enum class Algorithm { Mobons, Qpots, Random };

std::string to_string(Algorithm algorithm);
Algorithm algorithm_from_string(const std::string& name);

/// How the acquisition subproblem treats the network outputs Y.
///  EliminateY: genome = x, Y from solving the sampled network per x.
///  Joint:      genome = (x, Y) inside the output box, equality penalized.
///  Auto:       EliminateY for acyclic networks, Joint otherwise.
enum class SubproblemMode { Auto, EliminateY, Joint };

std::string to_string(SubproblemMode mode);
SubproblemMode subproblem_mode_from_string(const std::string& name);

struct GpSettings {
  KernelFamily family = KernelFamily::Matern52;
  int restarts = 3;
  /// Hyperparameters are refit on every new observation while a node holds
  /// at most this many points, then every refit_interval observations.
  std::size_t refit_every_until = 50;
  std::size_t refit_interval = 5;
};

struct RunConfig {
  std::string problem;
  Algorithm algorithm = Algorithm::Mobons;
  std::size_t init_budget = 21;
  std::size_t total_budget = 121;
  std::size_t batch_size = 1;
  std::uint64_t seed = 0;
  NsgaConfig nsga;
  std::size_t num_features = 1024;
  FixedPointOptions fixed_point;
  GpSettings gp;
  SubproblemMode mode = SubproblemMode::Auto;
  std::vector<double> reference_point;
  std::size_t max_redraws = 8;
  double feasibility_tolerance = 1e-6;

  void validate() const;
};

struct EvaluationRecord {
  std::size_t index = 0;      // 0-based evaluation counter
  std::size_t iteration = 0;  // acquisition round; 0 for the initial design
  bool initial = false;
  std::vector<double> design;
  std::vector<std::vector<double>> node_inputs;  // where each node was queried
  std::vector<double> observed;                  // node outputs at node_inputs
  std::vector<double> outputs;                   // true network state at design
  std::vector<double> objectives;                // C * outputs
  std::vector<double> constraints;               // C_cons * outputs
  double residual = 0.0;
  bool feasible = true;
  double wall_time = 0.0;  // seconds since run start
};

using RecordObserver = std::function<void(const EvaluationRecord& record, double hypervolume)>;

struct RunResult {
  Algorithm algorithm = Algorithm::Mobons;
  std::vector<EvaluationRecord> records;
  ParetoArchive archive;
  /// Archive hypervolume after the initial design, then after every evaluation.
  std::vector<double> hypervolume;
  /// Final surrogates: one per node (MOBONS) or per objective (qPOTS).
  std::vector<NodeModel> models;
  std::uint64_t initial_design_hash = 0;
  std::size_t acquisition_rounds = 0;
  std::size_t redraws = 0;
  std::size_t random_fallbacks = 0;
};

/// Latin-hypercube designs shared by every algorithm for a given seed.
std::vector<std::vector<double>> initial_designs(const FunctionNetwork& net, std::size_t n, std::uint64_t seed);
std::uint64_t hash_designs(const std::vector<std::vector<double>>& designs);

/// Initial node datasets: n Latin-hypercube points in each Z_k, with the
/// design block taken from `designs` and node-output blocks from an
/// independent hypercube over the output boxes. Every node is queried.
std::vector<NodeDataset> initialize(const FunctionNetwork& net, std::span<const NodeFunction> evaluators,
                                    const std::vector<std::vector<double>>& designs, std::uint64_t seed);

/// Per-node surrogates with refit cadence. White-box nodes keep their
/// exact model; their datasets are recorded but unused.
class NetworkSurrogate {
 public:
  NetworkSurrogate(const FunctionNetwork& net, std::span<const NodeFunction> evaluators,
                   std::vector<NodeDataset> datasets, GpSettings settings, std::uint64_t seed);

  void add(std::size_t node, std::span<const double> z, double y);
  /// Refits hyperparameters where the cadence asks for it and reconditions
  /// every other black-box model on its current data.
  void update(std::uint64_t seed);

  const std::vector<NodeModel>& models() const { return models_; }
  const std::vector<NodeDataset>& datasets() const { return datasets_; }

 private:
  void fit(std::size_t k, std::uint64_t seed);

  const FunctionNetwork* net_;
  GpSettings settings_;
  std::vector<NodeDataset> datasets_;
  std::vector<NodeModel> models_;
  std::vector<std::size_t> fitted_size_;
};

struct AcquiredPoint {
  std::vector<double> design;
  std::vector<double> outputs;     // sampled-network Y
  std::vector<double> objectives;  // C * Y under the sample
  double penalty = 0.0;
};

struct Acquisition {
  std::vector<AcquiredPoint> front;
  bool feasible = false;
  SubproblemMode mode = SubproblemMode::EliminateY;
};

struct AcquisitionProblem {
  MooProblem problem;
  std::vector<Interval> bounds;
  SubproblemMode mode;
};

/// Penalized multi-objective subproblem over a sampled network. Penalty is
/// the equality residual (joint mode, or a non-converged inner solve) plus
/// sum(max(0, h)) over the constraint rows.
AcquisitionProblem acquisition_problem(const FunctionNetwork& net, std::vector<NodeFunction> sampled,
                                       SubproblemMode mode, const FixedPointOptions& fixed_point);

/// Decodes an NSGA-II genome into (x, Y, objectives, penalty).
AcquiredPoint decode_acquired(const FunctionNetwork& net, const std::vector<NodeFunction>& sampled,
                              SubproblemMode mode, const FixedPointOptions& fixed_point, const Individual& ind);

/// One Thompson draw per node, then NSGA-II on the penalized subproblem.
Acquisition acquire(const FunctionNetwork& net, std::span<const NodeModel> models, const RunConfig& config,
                    std::uint64_t seed);

std::vector<double> standardize_design(std::span<const double> x, std::span<const Interval> box);

struct MaximinSelection {
  std::vector<std::size_t> picks;
  std::vector<double> distances;  // maximin value at each pick
};

/// Greedy maximin over candidate points against history (both already in
/// standardized coordinates). A candidate at distance 0 from history or an
/// earlier pick is never chosen, so fewer than q picks mean the set ran dry.
MaximinSelection greedy_maximin(const std::vector<std::vector<double>>& candidates,
                                const std::vector<std::vector<double>>& history, std::size_t q);

struct SelectedCandidate {
  AcquiredPoint point;
  double maximin = 0.0;
  std::size_t draw = 0;  // 0 = first Thompson draw, >0 = redraws
};

/// Produces a fresh acquisition for redraw r = 1, 2, ...
using RedrawFn = std::function<Acquisition(std::size_t redraw)>;

/// Batch selection: greedy maximin on the front, redrawing a Thompson
/// sample and re-solving when the front runs out. May return fewer than q
/// candidates once max_redraws is exhausted.
std::vector<SelectedCandidate> select_candidates(const FunctionNetwork& net, const Acquisition& first,
                                                 const std::vector<std::vector<double>>& history, std::size_t q,
                                                 const RedrawFn& redraw, std::size_t max_redraws);

/// MOBONS on a function network.
RunResult run(const FunctionNetwork& net, std::span<const NodeFunction> evaluators, const RunConfig& config,
              const RecordObserver& observer = {});

/// Random search or the structure-blind Thompson-sampling baseline.
RunResult run_baseline(Algorithm algorithm, const FunctionNetwork& net, std::span<const NodeFunction> evaluators,
                       const RunConfig& config, const RecordObserver& observer = {});

/// Dispatches on config.algorithm.
RunResult run_algorithm(const FunctionNetwork& net, std::span<const NodeFunction> evaluators,
                        const RunConfig& config, const RecordObserver& observer = {});

}  // namespace mobons
