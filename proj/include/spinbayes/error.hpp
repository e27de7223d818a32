#pragma once

#include <stdexcept>
#include <string>

namespace spinbayes {

/// Precondition violated by an argument (N < 2, nonpositive rate, |phi| >= pi/2, ...).
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Bad or inconsistent configuration. Carries the offending key when known.
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string& what, std::string key = {}, int line = 0, int column = 0)
      : std::runtime_error(what), key_(std::move(key)), line_(line), column_(column) {}

  const std::string& key() const noexcept { return key_; }
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

private:
  std::string key_;
  int line_;
  int column_;
};

/// A scenario could not complete (dynamic range exceeded, fit diverged, ...).
class ScenarioError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Parameter outside the unambiguous window of the shortest interrogation time.
class DynamicRangeError : public ScenarioError {
public:
  using ScenarioError::ScenarioError;
};

/// Every grid node of a posterior update underflowed to zero.
class DegeneratePosterior : public ScenarioError {
public:
  using ScenarioError::ScenarioError;
};

/// Nonlinear fit failed to converge within its iteration budget.
class FitError : public ScenarioError {
public:
  using ScenarioError::ScenarioError;
};

/// File system or stream failure.
class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace spinbayes
