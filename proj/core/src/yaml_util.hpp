#pragma once

#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

#include <yaml-cpp/yaml.h>

#include "mobons/errors.hpp"
#include "mobons/network.hpp"

namespace mobons {

// Thin typed accessors over yaml-cpp that turn every failure into a
// line-anchored ConfigError.
class YamlReader {
 public:
  explicit YamlReader(std::string source) : source_(std::move(source)) {}

  YAML::Node parse(const std::string& text) const {
    try {
      return YAML::Load(text);
    } catch (const YAML::ParserException& e) {
      throw ConfigError(source_, e.mark.line + 1, e.msg);
    }
  }

  [[noreturn]] void fail(const YAML::Node& node, const std::string& message) const {
    int line = 0;
    if (node.IsDefined()) line = node.Mark().line + 1;
    throw ConfigError(source_, line, message);
  }

  YAML::Node required(const YAML::Node& map, const std::string& key) const {
    auto child = map[key];
    if (!child) fail(map, "missing required key '" + key + "'");
    return child;
  }

  template <typename T>
  T scalar(const YAML::Node& node, const std::string& what) const {
    if (!node.IsScalar()) fail(node, what + " must be a scalar");
    try {
      return node.as<T>();
    } catch (const YAML::Exception&) {
      fail(node, "invalid value for " + what + ": '" + node.Scalar() + "'");
    }
  }

  std::string string(const YAML::Node& node, const std::string& what) const {
    return scalar<std::string>(node, what);
  }
  double real(const YAML::Node& node, const std::string& what) const {
    return scalar<double>(node, what);
  }
  std::uint64_t unsigned_int(const YAML::Node& node, const std::string& what) const {
    if (node.IsScalar() && !node.Scalar().empty() && node.Scalar()[0] == '-')
      fail(node, what + " must be non-negative");
    return scalar<std::uint64_t>(node, what);
  }
  bool boolean(const YAML::Node& node, const std::string& what) const {
    return scalar<bool>(node, what);
  }

  std::vector<double> doubles(const YAML::Node& node, const std::string& what) const {
    if (!node.IsSequence()) fail(node, what + " must be a list of numbers");
    std::vector<double> out;
    for (const auto& v : node) out.push_back(real(v, what));
    return out;
  }

  std::vector<std::size_t> indices(const YAML::Node& node, const std::string& what) const {
    if (!node.IsSequence()) fail(node, what + " must be a list of indices");
    std::vector<std::size_t> out;
    for (const auto& v : node) out.push_back(static_cast<std::size_t>(unsigned_int(v, what)));
    return out;
  }

  Interval interval(const YAML::Node& node, const std::string& what) const {
    auto v = doubles(node, what);
    if (v.size() != 2) fail(node, what + " must be [lower, upper]");
    if (!(v[0] < v[1])) fail(node, what + " needs lower < upper");
    return {v[0], v[1]};
  }

  /// Rejects keys outside `allowed` so typos do not pass silently.
  void check_keys(const YAML::Node& map, std::initializer_list<const char*> allowed) const {
    if (!map.IsMap()) fail(map, "expected a mapping");
    for (const auto& kv : map) {
      const auto key = kv.first.as<std::string>();
      bool ok = false;
      for (const char* a : allowed) ok = ok || key == a;
      if (!ok) fail(kv.first, "unknown key '" + key + "'");
    }
  }

  const std::string& source() const { return source_; }

 private:
  std::string source_;
};

}  // namespace mobons
