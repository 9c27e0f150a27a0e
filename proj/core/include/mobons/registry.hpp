#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "mobons/network.hpp"

namespace mobons {

/// Builds a node function from numeric parameters.
using NodeFactory = std::function<NodeFunction(std::span<const double> params)>;

/// Named node expressions referenced from network definition files.
class EvaluatorRegistry {
 public:
  void add(std::string name, NodeFactory factory);
  bool contains(const std::string& name) const;
  NodeFunction make(const std::string& name, std::span<const double> params = {}) const;
  std::vector<std::string> names() const;

  /// identity, sum, affine, square_shift, zdt4_multimodal, zdt4_tradeoff
  static const EvaluatorRegistry& builtin();

 private:
  std::map<std::string, NodeFactory> factories_;
};

namespace expressions {

double zdt4_multimodal(double x);
/// (91 + sum z[1..]) * (1 - sqrt(z[0] / (91 + sum z[1..])))
double zdt4_tradeoff(std::span<const double> z);

}  // namespace expressions

}  // namespace mobons
