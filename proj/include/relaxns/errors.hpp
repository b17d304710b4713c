#pragma once

#include <stdexcept>
#include <string>

namespace relaxns {

/// Raised when a pointwise function is evaluated outside its domain
/// (nonpositive density or temperature, nonpositive residual energy).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Invalid configuration or parameter set. Carries the offending line when
/// it comes from a config file (0 otherwise).
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what, int line = 0)
      : std::invalid_argument(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

}  // namespace relaxns
