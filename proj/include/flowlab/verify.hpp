#pragma once

// Acceptance checks, grouped into named suites. Used by `flowlab verify`
// and by the acceptance test binary.

#include <iosfwd>
#include <string>
#include <vector>

namespace flowlab::verify {

struct CheckResult {
  std::string suite;
  int criterion = 0;
  std::string name;
  bool passed = false;
  std::string detail;
};

/// identity, nfe, msd, reformulation, drift, convergence, ablation, replay.
const std::vector<std::string>& suite_names();

/// Runs one suite, or every suite for "all". Throws a Config error for an
/// unknown name.
std::vector<CheckResult> run_suite(const std::string& name);

/// Prints one line per check; returns true when all passed.
bool print_results(const std::vector<CheckResult>& results, std::ostream& out);

}  // namespace flowlab::verify
