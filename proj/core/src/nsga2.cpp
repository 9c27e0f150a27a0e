#include "mobons/nsga2.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <stdexcept>

#include "mobons/rng.hpp"

namespace mobons {

void NsgaConfig::validate() const {
  if (population_size < 4 || population_size % 2 != 0)
    throw std::invalid_argument("population_size must be even and >= 4");
  if (!(crossover_eta > 0.0) || !(mutation_eta > 0.0)) throw std::invalid_argument("distribution indices must be > 0");
  if (crossover_probability < 0.0 || crossover_probability > 1.0)
    throw std::invalid_argument("crossover_probability must lie in [0, 1]");
  if (mutation_probability > 1.0) throw std::invalid_argument("mutation_probability must lie in [0, 1]");
  if (feasibility_tolerance < 0.0) throw std::invalid_argument("feasibility_tolerance must be >= 0");
}

bool dominates(std::span<const double> a, std::span<const double> b) {
  bool strictly = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] > b[i]) return false;
    if (a[i] < b[i]) strictly = true;
  }
  return strictly;
}

namespace {

template <typename Dominates>
std::vector<std::vector<std::size_t>> sort_fronts(std::size_t n, Dominates&& dom) {
  std::vector<std::vector<std::size_t>> dominated_by_me(n);
  std::vector<std::size_t> counter(n, 0);
  std::vector<std::vector<std::size_t>> fronts(1);
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = p + 1; q < n; ++q) {
      if (dom(p, q)) {
        dominated_by_me[p].push_back(q);
        ++counter[q];
      } else if (dom(q, p)) {
        dominated_by_me[q].push_back(p);
        ++counter[p];
      }
    }
  }
  for (std::size_t p = 0; p < n; ++p)
    if (counter[p] == 0) fronts[0].push_back(p);
  if (fronts[0].empty()) return {};
  for (std::size_t i = 0; !fronts[i].empty(); ++i) {
    std::vector<std::size_t> next;
    for (auto p : fronts[i])
      for (auto q : dominated_by_me[p])
        if (--counter[q] == 0) next.push_back(q);
    std::sort(next.begin(), next.end());
    if (next.empty()) break;
    fronts.push_back(std::move(next));
  }
  return fronts;
}

}  // namespace

std::vector<std::vector<std::size_t>> nondominated_sort(const std::vector<std::vector<double>>& points) {
  if (points.empty()) return {};
  const auto m = points.front().size();
  for (const auto& p : points)
    if (p.size() != m) throw std::invalid_argument("nondominated_sort: objective vectors differ in length");
  return sort_fronts(points.size(), [&](std::size_t a, std::size_t b) { return dominates(points[a], points[b]); });
}

std::vector<double> crowding_distance(const std::vector<std::vector<double>>& front) {
  const auto n = front.size();
  std::vector<double> dist(n, 0.0);
  if (n == 0) return dist;
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (n <= 2) {
    std::fill(dist.begin(), dist.end(), inf);
    return dist;
  }
  const auto m = front.front().size();
  std::vector<std::size_t> order(n);
  for (std::size_t obj = 0; obj < m; ++obj) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return front[a][obj] < front[b][obj]; });
    dist[order.front()] = inf;
    dist[order.back()] = inf;
    const double range = front[order.back()][obj] - front[order.front()][obj];
    if (!(range > 0.0)) continue;
    for (std::size_t i = 1; i + 1 < n; ++i) {
      if (std::isinf(dist[order[i]])) continue;
      dist[order[i]] += (front[order[i + 1]][obj] - front[order[i - 1]][obj]) / range;
    }
  }
  return dist;
}

namespace {

class Evolver {
 public:
  Evolver(const MooProblem& problem, std::span<const Interval> bounds, const NsgaConfig& config)
      : problem_(problem), bounds_(bounds.begin(), bounds.end()), config_(config), rng_(config.seed) {
    config_.validate();
    if (bounds_.empty()) throw std::invalid_argument("evolve needs at least one decision variable");
    for (const auto& b : bounds_)
      if (!std::isfinite(b.lower) || !std::isfinite(b.upper) || !(b.lower <= b.upper))
        throw std::invalid_argument("evolve needs finite bounds with lower <= upper");
    mutation_probability_ = config_.mutation_probability < 0.0 ? 1.0 / static_cast<double>(bounds_.size())
                                                               : config_.mutation_probability;
  }

  NsgaResult run(const GenerationObserver& observer) {
    std::vector<Individual> pop;
    pop.reserve(config_.population_size);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::size_t i = 0; i < config_.population_size; ++i) {
      Individual ind;
      ind.genome.resize(bounds_.size());
      for (std::size_t d = 0; d < bounds_.size(); ++d)
        ind.genome[d] = bounds_[d].lower + unit(rng_) * bounds_[d].width();
      evaluate(ind);
      pop.push_back(std::move(ind));
    }
    assign_rank_and_crowding(pop);
    if (observer) observer(0, pop);

    for (std::size_t gen = 1; gen <= config_.generations; ++gen) {
      auto offspring = make_offspring(pop);
      for (auto& c : offspring) evaluate(c);
      pop.insert(pop.end(), std::make_move_iterator(offspring.begin()), std::make_move_iterator(offspring.end()));
      pop = survive(std::move(pop));
      if (observer) observer(gen, pop);
    }

    NsgaResult result;
    for (const auto& ind : pop)
      if (ind.rank == 0) result.front.push_back(ind);
    result.feasible = !result.front.empty() && feasible(result.front.front());
    result.population = std::move(pop);
    return result;
  }

 private:
  bool feasible(const Individual& i) const { return i.penalty <= config_.feasibility_tolerance; }

  // Feasibility-first dominance.
  bool constrained_dominates(const Individual& a, const Individual& b) const {
    const bool fa = feasible(a), fb = feasible(b);
    if (fa && fb) return dominates(a.objectives, b.objectives);
    if (fa != fb) return fa;
    return a.penalty < b.penalty;
  }

  void evaluate(Individual& ind) const {
    auto e = problem_(ind.genome);
    ind.objectives = std::move(e.objectives);
    ind.penalty = std::isfinite(e.penalty) ? std::max(0.0, e.penalty) : std::numeric_limits<double>::max();
    for (auto& v : ind.objectives)
      if (!std::isfinite(v)) v = std::numeric_limits<double>::max();
  }

  std::vector<std::vector<std::size_t>> fronts_of(const std::vector<Individual>& pop) const {
    return sort_fronts(pop.size(), [&](std::size_t a, std::size_t b) { return constrained_dominates(pop[a], pop[b]); });
  }

  void set_crowding(std::vector<Individual>& pop, const std::vector<std::size_t>& front) const {
    std::vector<std::vector<double>> objs;
    objs.reserve(front.size());
    for (auto i : front) objs.push_back(pop[i].objectives);
    const auto cd = crowding_distance(objs);
    for (std::size_t i = 0; i < front.size(); ++i) pop[front[i]].crowding = cd[i];
  }

  void assign_rank_and_crowding(std::vector<Individual>& pop) const {
    const auto fronts = fronts_of(pop);
    for (std::size_t r = 0; r < fronts.size(); ++r) {
      for (auto i : fronts[r]) pop[i].rank = r;
      set_crowding(pop, fronts[r]);
    }
  }

  // Drops the most crowded member one at a time, recomputing crowding after
  // each removal, until `keep` remain. Ties go to the later index.
  void prune(std::vector<Individual>& pop, std::vector<std::size_t>& front, std::size_t keep) const {
    while (front.size() > keep) {
      set_crowding(pop, front);
      std::size_t worst = 0;
      for (std::size_t i = 1; i < front.size(); ++i)
        if (pop[front[i]].crowding <= pop[front[worst]].crowding) worst = i;
      front.erase(front.begin() + static_cast<std::ptrdiff_t>(worst));
    }
    set_crowding(pop, front);
  }

  std::vector<Individual> survive(std::vector<Individual> merged) const {
    const auto fronts = fronts_of(merged);
    std::vector<Individual> next;
    next.reserve(config_.population_size);
    for (std::size_t r = 0; r < fronts.size() && next.size() < config_.population_size; ++r) {
      auto front = fronts[r];
      for (auto i : front) merged[i].rank = r;
      set_crowding(merged, front);
      if (next.size() + front.size() > config_.population_size) prune(merged, front, config_.population_size - next.size());
      for (auto i : front) next.push_back(merged[i]);
    }
    // crowding is recomputed on the survivors so tournaments see the current front
    std::vector<std::vector<std::size_t>> by_rank;
    for (std::size_t i = 0; i < next.size(); ++i) {
      if (next[i].rank >= by_rank.size()) by_rank.resize(next[i].rank + 1);
      by_rank[next[i].rank].push_back(i);
    }
    for (const auto& f : by_rank)
      if (!f.empty()) set_crowding(next, f);
    return next;
  }

  const Individual& tournament(const std::vector<Individual>& pop) {
    std::uniform_int_distribution<std::size_t> pick(0, pop.size() - 1);
    const auto& a = pop[pick(rng_)];
    const auto& b = pop[pick(rng_)];
    const double pa = feasible(a) ? 0.0 : a.penalty;
    const double pb = feasible(b) ? 0.0 : b.penalty;
    if (pa != pb) return pa < pb ? a : b;
    if (a.rank != b.rank) return a.rank < b.rank ? a : b;
    if (a.crowding != b.crowding) return a.crowding > b.crowding ? a : b;
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng_) < 0.5 ? a : b;
  }

  std::vector<Individual> make_offspring(const std::vector<Individual>& pop) {
    std::vector<Individual> children;
    children.reserve(config_.population_size);
    while (children.size() < config_.population_size) {
      Individual c1, c2;
      c1.genome = tournament(pop).genome;
      c2.genome = tournament(pop).genome;
      crossover(c1.genome, c2.genome);
      mutate(c1.genome);
      mutate(c2.genome);
      children.push_back(std::move(c1));
      children.push_back(std::move(c2));
    }
    return children;
  }

  // Simulated binary crossover, bounded form.
  void crossover(std::vector<double>& a, std::vector<double>& b) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    if (unit(rng_) > config_.crossover_probability) return;
    const double eta = config_.crossover_eta;
    for (std::size_t d = 0; d < a.size(); ++d) {
      if (unit(rng_) > 0.5) continue;
      const double lo = bounds_[d].lower, hi = bounds_[d].upper;
      if (std::abs(a[d] - b[d]) <= 1e-14 || hi <= lo) continue;
      const double y1 = std::min(a[d], b[d]);
      const double y2 = std::max(a[d], b[d]);
      const double r = unit(rng_);

      auto child = [&](double beta_bound) {
        const double alpha = 2.0 - std::pow(beta_bound, -(eta + 1.0));
        double betaq;
        if (r <= 1.0 / alpha) betaq = std::pow(r * alpha, 1.0 / (eta + 1.0));
        else betaq = std::pow(1.0 / (2.0 - r * alpha), 1.0 / (eta + 1.0));
        return betaq;
      };
      const double span = y2 - y1;
      const double bq1 = child(1.0 + 2.0 * (y1 - lo) / span);
      double c1 = 0.5 * ((y1 + y2) - bq1 * span);
      const double bq2 = child(1.0 + 2.0 * (hi - y2) / span);
      double c2 = 0.5 * ((y1 + y2) + bq2 * span);
      c1 = std::clamp(c1, lo, hi);
      c2 = std::clamp(c2, lo, hi);
      if (unit(rng_) <= 0.5) std::swap(c1, c2);
      a[d] = c1;
      b[d] = c2;
    }
  }

  // Polynomial mutation, bounded form.
  void mutate(std::vector<double>& g) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double eta = config_.mutation_eta;
    for (std::size_t d = 0; d < g.size(); ++d) {
      if (unit(rng_) > mutation_probability_) continue;
      const double lo = bounds_[d].lower, hi = bounds_[d].upper;
      if (hi <= lo) continue;
      const double y = g[d];
      const double d1 = (y - lo) / (hi - lo);
      const double d2 = (hi - y) / (hi - lo);
      const double r = unit(rng_);
      const double pw = 1.0 / (eta + 1.0);
      double dq;
      if (r < 0.5) {
        const double v = 2.0 * r + (1.0 - 2.0 * r) * std::pow(1.0 - d1, eta + 1.0);
        dq = std::pow(v, pw) - 1.0;
      } else {
        const double v = 2.0 * (1.0 - r) + 2.0 * (r - 0.5) * std::pow(1.0 - d2, eta + 1.0);
        dq = 1.0 - std::pow(v, pw);
      }
      g[d] = std::clamp(y + dq * (hi - lo), lo, hi);
    }
  }

  const MooProblem& problem_;
  std::vector<Interval> bounds_;
  NsgaConfig config_;
  Rng rng_;
  double mutation_probability_;
};

}  // namespace

NsgaResult evolve(const MooProblem& problem, std::span<const Interval> bounds, const NsgaConfig& config,
                  const GenerationObserver& observer) {
  return Evolver(problem, bounds, config).run(observer);
}

void write_population_csv(std::ostream& os, std::size_t generation, std::span<const Individual> population,
                          bool header) {
  if (population.empty()) return;
  if (header) {
    os << "generation,rank,penalty";
    for (std::size_t i = 0; i < population.front().objectives.size(); ++i) os << ",f" << i;
    for (std::size_t i = 0; i < population.front().genome.size(); ++i) os << ",x" << i;
    os << '\n';
  }
  for (const auto& ind : population) {
    os << generation << ',' << ind.rank << ',' << ind.penalty;
    for (double v : ind.objectives) os << ',' << v;
    for (double v : ind.genome) os << ',' << v;
    os << '\n';
  }
}

}  // namespace mobons
