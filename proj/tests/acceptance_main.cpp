#include <chrono>
#include <cstdio>
#include <vector>

#include "maslov/acceptance.hpp"

// Runs every acceptance criterion at its natural dimension range and prints
// one verdict line per criterion. Exit status is the number of failures.
int main() {
  maslov::AcceptanceConfig cfg;
  const auto start = std::chrono::steady_clock::now();
  const std::vector<maslov::CriterionResult> results =
      maslov::run_acceptance(cfg);

  int failures = 0;
  for (const maslov::CriterionResult& r : results) {
    if (!r.pass) ++failures;
    std::printf("%s  criterion %2d  %-22s  measured=%-12.5g expected=%-12.5g "
                "tol=%-8.3g  %6.2fs  %s\n",
                r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(), r.measured,
                r.expected, r.tolerance, r.runtime_seconds, r.detail.c_str());
  }
  const double total =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  std::printf("%d/%d criteria passed in %.2fs\n",
              static_cast<int>(results.size()) - failures,
              static_cast<int>(results.size()), total);
  return failures;
}
