#pragma once

#include <string>
#include <vector>

namespace bergman {

struct CheckResult {
  std::string id;           // "C1".."C12" for acceptance criteria, "<suite>.<name>" otherwise
  std::string description;
  bool passed = false;
  std::string detail;       // measured values against the required ones
  double seconds = 0.0;
};

struct SuiteResult {
  std::string name;
  std::vector<CheckResult> checks;

  bool passed() const;
  int failures() const;
};

inline constexpr int kCriterionCount = 12;

// Acceptance criterion k in [1, 12]. Exceptions thrown by the computation
// are reported as failures with the message in `detail`.
CheckResult run_criterion(int k);

// kernels, weights, toeplitz, schatten, composition, all.
const std::vector<std::string>& suite_names();
bool is_suite(const std::string& name);
// Throws std::invalid_argument for unknown names.
SuiteResult run_suite(const std::string& name);

// Invariants of the disc geometry: Mobius involution and isometry, dyadic
// cell coverage, Carleson box areas, lattice separation and covering.
SuiteResult geometry_suite();

}  // namespace bergman
