#pragma once

#include <span>
#include <vector>

namespace mobons {

/// Nondominated set of evaluation records with its hypervolume.
class ParetoArchive {
 public:
  struct Entry {
    std::size_t record = 0;
    std::vector<double> objectives;
  };

  ParetoArchive() = default;
  explicit ParetoArchive(std::vector<double> reference);

  /// Adds the point unless an entry dominates it; drops entries it dominates.
  bool insert(std::size_t record, std::span<const double> objectives);

  double hypervolume() const { return hypervolume_; }
  const std::vector<Entry>& entries() const { return entries_; }
  std::vector<std::vector<double>> objectives() const;
  const std::vector<double>& reference() const { return reference_; }
  std::size_t size() const { return entries_.size(); }

 private:
  std::vector<double> reference_;
  std::vector<Entry> entries_;
  double hypervolume_ = 0.0;
};

}  // namespace mobons
