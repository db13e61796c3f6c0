#pragma once

#include <stdexcept>
#include <string>

namespace cidp {

/// Schema or invariant violation in a scenario document.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Internal consistency failure: a state that correct code never produces.
class InternalError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

} // namespace cidp
