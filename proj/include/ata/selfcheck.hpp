#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ata {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

// Random small instances against the exhaustive optimizer: the minimizer must
// match the optimal max load exactly and realize the smallest number of
// indices at the max.
CheckResult check_allocator_exactness(int instances, std::uint64_t seed);

// Pairwise balance of minimizer outputs: a_j s_j <= (a_i + 1) s_i for all i, j.
CheckResult check_allocator_pairwise_balance(int instances, std::uint64_t seed);

// The over-allocation gap of a minimizer output is 1 or 2 on every arm.
CheckResult check_overallocation_gap(int instances, std::uint64_t seed);

// Monte Carlo mean of the realized round time against its proxy-loss bounds
// ell <= E[C] <= (1 + 4 eta ln B) ell, lower edge with 3-SE slack.
CheckResult check_round_time_mean_bounds(int allocations, int replications,
                                         std::uint64_t seed);

// Lower confidence bounds stay below the true mean in all but ~1/k^2 of
// trials; checked for both bound flavors and every distribution family.
CheckResult check_lcb_coverage(int trials, std::uint64_t seed);

std::vector<CheckResult> run_all_checks(std::uint64_t seed);

}  // namespace ata
