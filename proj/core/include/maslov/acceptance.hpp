#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "maslov/harness.hpp"

namespace maslov {

// The acceptance suite: one entry per verification criterion, shared by the
// acceptance test binary and the CLI `report` command. Each criterion reports
// its most informative scalar as `measured` against `expected` within
// `tolerance`; compound criteria additionally describe their sub-checks in
// `detail`, and `pass` reflects every sub-check.

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  double measured = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  double runtime_seconds = 0.0;
  std::string detail;
};

struct AcceptanceConfig {
  std::uint64_t seed = 20240901;
  int n_min = 1;
  int n_max = 64;  // criteria clamp to their own natural dimension ranges
  EstimatorConfig estimator;
};

inline constexpr int kCriterionCount = 10;

// Runs one criterion; empty when the configured n-range misses the
// criterion's natural range entirely. id must lie in [1, kCriterionCount].
std::optional<CriterionResult> run_criterion(int id,
                                             const AcceptanceConfig& cfg = {});

// Runs every criterion that intersects the configured n-range, in id order.
std::vector<CriterionResult> run_acceptance(const AcceptanceConfig& cfg = {});

}  // namespace maslov
