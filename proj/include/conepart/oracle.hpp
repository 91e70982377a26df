#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "conepart/partition.hpp"

namespace conepart {

/// One generated all-orthant instance (n unit blocks) checked four ways:
/// exact Goldman-Tucker partition, lineality-based geometric classification,
/// the three-description equivalence, and the floating classifier.
struct OracleSummary {
  int instances = 0;
  int mismatches = 0;
  int indeterminates = 0;
  int three_way_failures = 0;
  std::vector<std::string> failures;  // one line per offending instance

  bool clean() const { return mismatches == 0 && indeterminates == 0 && three_way_failures == 0; }
};

OracleSummary oracle_check(std::uint64_t seed, int count, int m, int n, const SolverConfig& config);

}  // namespace conepart
