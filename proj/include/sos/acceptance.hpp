#pragma once

#include <iosfwd>
#include <string>
#include <vector>

// The workbench self-check suite, shared by `sosw fixtures run` and the
// acceptance test binary.

namespace sos::acceptance {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::vector<std::string> failures;
};

// Runs every criterion, printing one pass/fail line per criterion to `log`.
std::vector<CriterionResult> run_all(std::ostream& log);

}  // namespace sos::acceptance
