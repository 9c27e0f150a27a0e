#include "mobons/archive.hpp"

#include <algorithm>

#include "mobons/metrics.hpp"
#include "mobons/nsga2.hpp"

namespace mobons {

ParetoArchive::ParetoArchive(std::vector<double> reference) : reference_(std::move(reference)) {}

bool ParetoArchive::insert(std::size_t record, std::span<const double> objectives) {
  for (const auto& e : entries_)
    if (dominates(e.objectives, objectives)) return false;
  std::erase_if(entries_, [&](const Entry& e) { return dominates(objectives, e.objectives); });
  entries_.push_back({record, {objectives.begin(), objectives.end()}});
  if (!reference_.empty()) hypervolume_ = mobons::hypervolume(this->objectives(), reference_);
  return true;
}

std::vector<std::vector<double>> ParetoArchive::objectives() const {
  std::vector<std::vector<double>> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.objectives);
  return out;
}

}  // namespace mobons
