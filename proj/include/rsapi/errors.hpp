#pragma once

#include <stdexcept>
#include <string>

namespace rsapi {

/// A caller broke a documented precondition (bad action index, invalid
/// parameter, updating a finalized state, ...).
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A generative model produced an output outside its declared ranges.
class ModelIntegrityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The requested quantity has no implementation for this input
/// (e.g. an analytic value for a simulator-only environment).
class UnsupportedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of a formula.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A statistic was requested before any data was recorded.
class UndefinedStatistic : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Invalid experiment configuration. `field()` names the offending key path.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(field.empty() ? message : field + ": " + message),
        field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace rsapi
