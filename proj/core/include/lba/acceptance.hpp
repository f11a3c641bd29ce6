#pragma once

#include <string>
#include <vector>

namespace lba {

/// Outcome of one acceptance criterion.
struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;  ///< one-line summary of measured vs required
  double seconds = 0.0;
};

/// Runs the acceptance criteria (all of them, or the ids in `only`), in id
/// order. Tolerances are pinned inside; `threads` is forwarded to the
/// simulation-backed criteria. Exceptions inside a criterion are caught and
/// reported as failures with the message in `detail`.
std::vector<CriterionResult> run_acceptance(const std::vector<int>& only = {}, int threads = 1);

/// Number of criteria in the suite.
int acceptance_criterion_count();

}  // namespace lba
