#pragma once

#include <stdexcept>
#include <string>

namespace mobons {

/// Malformed configuration or network file. line() is 1-based, 0 if unknown.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& source, int line, const std::string& message)
      : std::runtime_error(format(source, line, message)), line_(line) {}

  int line() const { return line_; }

 private:
  static std::string format(const std::string& source, int line, const std::string& message) {
    std::string s = source.empty() ? "config" : source;
    if (line > 0) s += ":" + std::to_string(line);
    return s + ": " + message;
  }
  int line_;
};

}  // namespace mobons
