// Acceptance report: one line per criterion, nonzero exit if any fails.

#include <cstdio>

#include "xinu/verify.hpp"

int main() {
  const auto results = xinu::verify::run({});
  int failed = 0;
  for (const auto& r : results) {
    const auto* w = r.worst();
    std::printf("[PRIMARY] %d %s: %s", r.criterion, r.name.c_str(), r.pass() ? "PASS" : "FAIL");
    if (w) std::printf("  (worst: %s = %.3g, tol %.3g)", w->label.c_str(), w->measured, w->tolerance);
    std::printf("\n");
    if (!r.pass()) {
      ++failed;
      for (const auto& l : r.lines)
        if (!l.pass()) std::printf("    failed: %s = %.6g > %.3g\n", l.label.c_str(), l.measured, l.tolerance);
    }
  }
  std::printf("%zu criteria, %d failed\n", results.size(), failed);
  return failed == 0 ? 0 : 1;
}
