#pragma once
//
// Acceptance harness: the numbered verification criteria gating this
// artifact.  Each criterion is an independently runnable check over a pinned
// parameter grid; --d-max / --n-max style restrictions shrink the grids
// monotonically.  The perturbation switch is a sensitivity probe of the
// harness itself: it flips one Bell amplitude by 1e-3, which must make at
// least one criterion fail.

#include <cstdint>
#include <string>
#include <vector>

namespace qdistill {

struct VerifyOptions {
  int d_max = 0;  // 0 = unrestricted: each criterion runs its pinned grid
  int n_max = 0;  // 0 = unrestricted
  std::uint64_t seed = 0;
  bool inject_perturbation = false;
};

struct CriterionResult {
  int index = 0;  // 1-based
  std::string name;
  bool passed = false;
  std::string details;  // measured values, or the first failure
  double runtime_seconds = 0.0;
};

int criterion_count();

/// Run one criterion (1-based index).  Per-criterion runtime budgets are
/// enforced here; the whole-grid budget only in run_all_criteria.
CriterionResult run_criterion(int index, const VerifyOptions& options);

/// Run every criterion in index order.  The whole-grid runtime budget
/// (5 minutes) folds into the final criterion's verdict.
std::vector<CriterionResult> run_all_criteria(const VerifyOptions& options);

bool all_passed(const std::vector<CriterionResult>& results);

/// "[PASS]  3 relative-entropy-log2d: ... (0.12 s)"
std::string criterion_line(const CriterionResult& result);

}  // namespace qdistill
