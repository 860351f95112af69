// Runs acceptance criteria and prints one line per criterion:
//   PASS C3 (8.41 s) <description> | <measured values>
// Exit status is 0 iff every requested criterion passed.

#include <CLI11.hpp>

#include <cstdio>
#include <vector>

#include "bergman/verification.hpp"

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::vector<int> ks;
  app.add_option("--criterion,-c", ks, "criterion indices (default: all)")->check(CLI::Range(1, bergman::kCriterionCount));
  CLI11_PARSE(app, argc, argv);
  if (ks.empty()) {
    for (int k = 1; k <= bergman::kCriterionCount; ++k) ks.push_back(k);
  }
  int failures = 0;
  for (int k : ks) {
    const bergman::CheckResult r = bergman::run_criterion(k);
    std::printf("%s %s (%.2f s) %s | %s\n", r.passed ? "PASS" : "FAIL", r.id.c_str(), r.seconds, r.description.c_str(),
                r.detail.c_str());
    std::fflush(stdout);
    failures += r.passed ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
