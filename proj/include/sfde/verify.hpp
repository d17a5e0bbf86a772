#pragma once

// Self-contained oracle and invariant checks behind the `verify` subcommand.

#include <iosfwd>
#include <string>
#include <vector>

namespace sfde {

struct CheckResult {
  std::string name;
  bool pass{false};
  double observed{0.0};
  double expected{0.0};
  double tolerance{0.0};
};

/// Runs every check; each compares an observed quantity with an expected one
/// under |observed - expected| <= tolerance.
std::vector<CheckResult> run_verification_suite();

/// `CHECK <name> <pass|fail> <observed> <expected> <tol>`
void print_check(std::ostream& out, const CheckResult& check);

}  // namespace sfde
