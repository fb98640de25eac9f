#pragma once

#include <cstdint>
#include <vector>

#include "ata/distributions.hpp"
#include "ata/rng.hpp"

namespace ata {

// Integer task counts per worker; a valid action sums to the budget B.
using AllocationVector = std::vector<int>;
using ScoreVector = std::vector<double>;

int allocation_total(const AllocationVector& a);

// max_i a[i] * lambda[i]
double proxy_loss(const AllocationVector& a, const ScoreVector& lambda);

// Minimizes proxy_loss(., scores) over all budget-B allocations by adding one
// unit at a time, always to the index that keeps the max load smallest; among
// equally good choices it picks the one leaving the fewest indices at the max
// (residual ties go to the lowest index after a stable ascending sort of the
// scores). Requires strictly positive scores. O(n log min(B,n) + B min(B,n)).
AllocationVector ras(const ScoreVector& scores, int budget);

struct BruteForceResult {
  AllocationVector alloc;
  double loss = 0.0;
  int argmax_cardinality = 0;  // smallest over all loss minimizers
};

// Exhaustive reference optimizer for testing. Refuses instances with more
// than 10^7 candidate allocations.
BruteForceResult brute_force_opt(const ScoreVector& scores, int budget);

// Per-arm usage statistics accumulated across rounds.
struct AllocatorState {
  std::vector<std::int64_t> usage_counts;
  std::vector<double> usage_times;
  std::vector<double> empirical_means;
  std::int64_t round_index = 1;

  explicit AllocatorState(int n = 0)
      : usage_counts(n, 0), usage_times(n, 0.0), empirical_means(n, 0.0) {}
  int size() const { return static_cast<int>(usage_counts.size()); }
};

// Width of the confidence interval at round k for an arm observed
// usage_count times; +infinity while the arm is unobserved.
double conf_width(double alpha, std::int64_t round_k, std::int64_t usage_count);

// Additive lower confidence bounds (mean estimate minus conf_width, clipped
// at zero). Unobserved arms score zero.
ScoreVector lcb_additive(const AllocatorState& state, double alpha);

// Multiplicative lower confidence bounds: mean estimate times
// (1 - 2*eta*(sqrt(ln(2k^2)/K) + ln(2k^2)/K)), clipped at zero.
ScoreVector lcb_empirical(const AllocatorState& state, double eta);

struct Policy {
  enum class Kind { ATA, ATAEmpirical, OFTA, UTA, GTA };
  Kind kind = Kind::OFTA;
  double alpha = 0.0;  // ATA
  double eta = 0.0;    // ATAEmpirical

  static Policy ata(double alpha);
  static Policy ata_empirical(double eta);
  static Policy ofta() { return Policy{Kind::OFTA, 0.0, 0.0}; }
  static Policy uta() { return Policy{Kind::UTA, 0.0, 0.0}; }
  static Policy gta() { return Policy{Kind::GTA, 0.0, 0.0}; }

  bool is_learning() const { return kind == Kind::ATA || kind == Kind::ATAEmpirical; }
  const char* name() const;
};

// Allocation for one round of a non-greedy policy. ATA variants score arms by
// their lower confidence bounds; while any score is zero the budget is spread
// uniformly over the zero-score arms (remainder rotated by round index).
// OFTA runs the minimizer on the true means, UTA spreads uniformly at random.
// The rng argument is consumed by UTA only.
AllocationVector choose_allocation(const Policy& policy, const AllocatorState& state,
                                   const FleetSpec& fleet, int budget, Rng& rng);

// Fold one round of observed task times into the state. times_by_arm[i] must
// hold exactly a[i] entries; arms with a[i] == 0 are untouched.
void update_state(AllocatorState& state, const AllocationVector& a,
                  const std::vector<std::vector<double>>& times_by_arm);

// Smallest extra unit count on one arm that pushes the max load strictly
// above the optimal value ell_bar; always 1 or 2 for minimizer outputs, and
// anything else reports a bug in the minimizer.
int overallocation_gap(double ell_bar, int a_bar_i, double mu_i);

// Sum over rounds of proxy_loss(a_k, means) minus the optimal per-round loss.
double cumulative_regret(const std::vector<AllocationVector>& history,
                         const FleetSpec& fleet, int budget);

}  // namespace ata
