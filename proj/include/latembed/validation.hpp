#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "latembed/config.hpp"

namespace latembed {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
};

struct AcceptanceCriterion {
  int id;
  std::string name;
  std::function<CriterionResult()> run;
};

/// The acceptance criteria, in order. Each one is self-contained and
/// deterministic (fixed seeds).
const std::vector<AcceptanceCriterion>& acceptance_criteria();

/// "[PASS] 3 curvature integral: ..." style line.
std::string format_result(const CriterionResult& result);

/// Runs every criterion, printing one line per criterion to `log` when given.
std::vector<CriterionResult> run_acceptance_suite(std::ostream* log = nullptr);

/// Frame and curvature sanity of the configured manifold on a small grid.
CriterionResult check_configured_manifold(const RunConfig& config);

}  // namespace latembed
