#pragma once

#include <string>
#include <vector>

namespace gsprk {

struct CheckResult {
  std::string suite;
  std::string name;
  double measured = 0.0;
  double threshold = 0.0;
  bool passed = false;
  std::string detail;  // set when the check could not be evaluated
};

/// tableaux, symplecticity, equivalence, noether, generating, hj, all.
std::vector<std::string> verify_scopes();

/// Runs the invariant suites for `scope`. Numerical failures inside a check
/// are reported as failed checks rather than thrown. Throws InvalidSpecError
/// for an unknown scope.
std::vector<CheckResult> run_verification(const std::string& scope);

/// One line per check: `PASS|FAIL suite/name measured=.. threshold=..`.
std::string render_checks(const std::vector<CheckResult>& checks);

}  // namespace gsprk
