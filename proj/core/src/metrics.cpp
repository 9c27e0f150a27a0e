#include "mobons/metrics.hpp"

#include <algorithm>
#include <stdexcept>

#include "mobons/nsga2.hpp"

namespace mobons {

std::vector<std::size_t> pareto_filter(const std::vector<std::vector<double>>& points) {
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < points.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < points.size() && !dominated; ++j)
      dominated = j != i && dominates(points[j], points[i]);
    if (!dominated) keep.push_back(i);
  }
  return keep;
}

namespace {

using Point2 = std::pair<double, double>;

// Points already strictly inside the reference box.
double sweep_2d(std::vector<Point2> pts, double r0, double r1) {
  std::sort(pts.begin(), pts.end());
  double volume = 0.0;
  double best = r1;
  for (const auto& [a, b] : pts) {
    if (b < best) {
      volume += (r0 - a) * (best - b);
      best = b;
    }
  }
  return volume;
}

bool dominates_reference(std::span<const double> p, std::span<const double> r) {
  return dominates(p, r);
}

}  // namespace

double hypervolume(const std::vector<std::vector<double>>& points, std::span<const double> reference) {
  const auto m = reference.size();
  if (m != 2 && m != 3) throw std::invalid_argument("hypervolume supports M = 2 or 3 objectives only");
  for (const auto& p : points)
    if (p.size() != m) throw std::invalid_argument("hypervolume: point dimension does not match reference");

  // Points with a coordinate equal to the reference add no measure; keep
  // only those strictly inside on every axis.
  std::vector<std::vector<double>> inside;
  for (const auto& p : points) {
    if (!dominates_reference(p, reference)) continue;
    bool strict = true;
    for (std::size_t i = 0; i < m; ++i) strict = strict && p[i] < reference[i];
    if (strict) inside.push_back(p);
  }
  if (inside.empty()) return 0.0;

  if (m == 2) {
    std::vector<Point2> pts;
    pts.reserve(inside.size());
    for (const auto& p : inside) pts.emplace_back(p[0], p[1]);
    return sweep_2d(std::move(pts), reference[0], reference[1]);
  }

  // M = 3: slice along the third objective.
  std::sort(inside.begin(), inside.end(), [](const auto& a, const auto& b) { return a[2] < b[2]; });
  double volume = 0.0;
  std::vector<Point2> active;
  for (std::size_t i = 0; i < inside.size(); ++i) {
    active.emplace_back(inside[i][0], inside[i][1]);
    const double next = i + 1 < inside.size() ? inside[i + 1][2] : reference[2];
    const double depth = next - inside[i][2];
    if (depth > 0.0) volume += depth * sweep_2d(active, reference[0], reference[1]);
  }
  return volume;
}

}  // namespace mobons
