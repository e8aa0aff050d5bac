#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace spinfact {

inline constexpr const char* kToolVersion = "spinfact 1.0.0";

struct CriterionResult {
  int number = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

struct AcceptanceReport {
  std::vector<CriterionResult> criteria;
  unsigned seed = 0;

  bool all_passed() const;
};

/// Runs the full acceptance battery, printing one pass/fail line per
/// criterion to `log` as results arrive.
AcceptanceReport run_acceptance(unsigned seed, std::ostream& log);

}  // namespace spinfact
