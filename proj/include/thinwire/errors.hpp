#pragma once

#include <stdexcept>
#include <string>

namespace thinwire {

/// Argument outside the mathematical domain of an operation (x <= 0 for Y_n,
/// evaluation point inside a cylinder, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A linear system or placement problem that cannot be solved reliably.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what, double condition_estimate = 0.0)
      : std::runtime_error(what), condition_(condition_estimate) {}

  /// 1-norm condition estimate of the offending system, 0 if not applicable.
  [[nodiscard]] double condition_estimate() const noexcept { return condition_; }

 private:
  double condition_;
};

/// Malformed run configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Output could not be written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace thinwire
