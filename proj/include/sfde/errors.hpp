#pragma once

#include <stdexcept>
#include <string>

namespace sfde {

/// Parameter outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Inconsistent or invalid configuration (mesh sizes, study plans, config files).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input sequence longer than a table or buffer supports.
class LengthError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Caller broke an operation's precondition (dimension mismatch, bad index).
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Request exceeds what a desk-scale routine is built for.
class CapabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sfde
