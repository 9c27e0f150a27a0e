#include "mobons/registry.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace mobons {

void EvaluatorRegistry::add(std::string name, NodeFactory factory) {
  factories_[std::move(name)] = std::move(factory);
}

bool EvaluatorRegistry::contains(const std::string& name) const {
  return factories_.count(name) != 0;
}

NodeFunction EvaluatorRegistry::make(const std::string& name, std::span<const double> params) const {
  auto it = factories_.find(name);
  if (it == factories_.end()) throw std::invalid_argument("unknown node function '" + name + "'");
  return it->second(params);
}

std::vector<std::string> EvaluatorRegistry::names() const {
  std::vector<std::string> out;
  for (const auto& [name, _] : factories_) out.push_back(name);
  return out;
}

namespace expressions {

double zdt4_multimodal(double x) {
  return x * x - 10.0 * std::cos(4.0 * std::numbers::pi * x);
}

double zdt4_tradeoff(std::span<const double> z) {
  if (z.empty()) throw std::invalid_argument("zdt4_tradeoff needs at least one input");
  const double h = 91.0 + std::accumulate(z.begin() + 1, z.end(), 0.0);
  return h * (1.0 - std::sqrt(z[0] / h));
}

}  // namespace expressions

namespace {

void expect_params(const char* name, std::span<const double> params, std::size_t n) {
  if (params.size() != n)
    throw std::invalid_argument(std::string(name) + " expects " + std::to_string(n) +
                                " parameter(s), got " + std::to_string(params.size()));
}

EvaluatorRegistry make_builtin() {
  EvaluatorRegistry r;
  r.add("identity", [](std::span<const double> p) -> NodeFunction {
    expect_params("identity", p, 0);
    return [](std::span<const double> z) { return z[0]; };
  });
  r.add("sum", [](std::span<const double> p) -> NodeFunction {
    expect_params("sum", p, 0);
    return [](std::span<const double> z) { return std::accumulate(z.begin(), z.end(), 0.0); };
  });
  r.add("affine", [](std::span<const double> p) -> NodeFunction {
    if (p.empty()) throw std::invalid_argument("affine expects an offset followed by coefficients");
    std::vector<double> c(p.begin(), p.end());
    return [c](std::span<const double> z) {
      if (z.size() + 1 != c.size())
        throw std::invalid_argument("affine: input length does not match coefficients");
      double v = c[0];
      for (std::size_t i = 0; i < z.size(); ++i) v += c[i + 1] * z[i];
      return v;
    };
  });
  r.add("square_shift", [](std::span<const double> p) -> NodeFunction {
    if (p.size() > 1) throw std::invalid_argument("square_shift expects at most one parameter");
    const double a = p.empty() ? 0.0 : p[0];
    return [a](std::span<const double> z) { return (z[0] - a) * (z[0] - a); };
  });
  r.add("zdt4_multimodal", [](std::span<const double> p) -> NodeFunction {
    expect_params("zdt4_multimodal", p, 0);
    return [](std::span<const double> z) { return expressions::zdt4_multimodal(z[0]); };
  });
  r.add("zdt4_tradeoff", [](std::span<const double> p) -> NodeFunction {
    expect_params("zdt4_tradeoff", p, 0);
    return [](std::span<const double> z) { return expressions::zdt4_tradeoff(z); };
  });
  return r;
}

}  // namespace

const EvaluatorRegistry& EvaluatorRegistry::builtin() {
  static const EvaluatorRegistry registry = make_builtin();
  return registry;
}

}  // namespace mobons
