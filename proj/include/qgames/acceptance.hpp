#pragma once

// The acceptance suites: one pass/fail result per criterion.  Shared by
// the acceptance test binary and `qgames verify`.

#include <functional>
#include <string>
#include <vector>

namespace qgames {

struct CriterionResult {
  std::string suite;
  std::string name;
  bool pass = false;
  double seconds = 0;
  /// Time limit of the criterion in seconds.
  double limit = 0;
  std::string detail;
};

/// "measures", "games", "generators", "tables", "all".
std::vector<std::string> suite_names();

/// Runs a suite, calling `report` as each criterion finishes.  Throws
/// InvalidArgument for an unknown suite.
std::vector<CriterionResult> run_suite(const std::string& suite,
                                       const std::function<void(const CriterionResult&)>& report = {});

/// "PASS [suite] name (1.2 s / 30 s): detail"
std::string format_result(const CriterionResult& r);

}  // namespace qgames
