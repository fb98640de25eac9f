#include "ata/allocation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace ata {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool ok, const char* message) {
  if (!ok) throw std::invalid_argument(message);
}

double log_2k2(std::int64_t round_k) {
  return std::log(2.0 * static_cast<double>(round_k) * static_cast<double>(round_k));
}

}  // namespace

int allocation_total(const AllocationVector& a) {
  return std::accumulate(a.begin(), a.end(), 0);
}

double proxy_loss(const AllocationVector& a, const ScoreVector& lambda) {
  require(a.size() == lambda.size(), "proxy_loss: dimension mismatch");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    worst = std::max(worst, static_cast<double>(a[i]) * lambda[i]);
  }
  return worst;
}

AllocationVector ras(const ScoreVector& scores, int budget) {
  const int n = static_cast<int>(scores.size());
  require(n >= 1, "ras: empty score vector");
  require(budget >= 1, "ras: budget must be at least 1");
  for (double s : scores) require(s > 0.0, "ras: scores must be strictly positive");

  // Only the smallest min(B, n) scores can ever receive a unit. Sort that
  // prefix ascending, ties keeping the original arm order.
  const int m = std::min(budget, n);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::partial_sort(order.begin(), order.begin() + m, order.end(),
                    [&scores](int a, int b) {
                      if (scores[a] != scores[b]) return scores[a] < scores[b];
                      return a < b;
                    });

  std::vector<double> s(m);
  for (int i = 0; i < m; ++i) s[i] = scores[order[i]];

  std::vector<int> a(m, 0);
  a[0] = 1;
  double cur_loss = s[0];
  int first_zero = (m > 1) ? 1 : m;  // support stays a prefix of the sorted order

  for (int unit = 2; unit <= budget; ++unit) {
    const int last = std::min(first_zero, m - 1);

    // Adding a unit at i moves the loss to max(cur_loss, (a_i + 1) s_i).
    double best = kInf;
    for (int i = 0; i <= last; ++i) {
      const double cand = std::max(cur_loss, (a[i] + 1.0) * s[i]);
      best = std::min(best, cand);
    }

    // Among the loss-minimizing candidates keep the one whose result has the
    // fewest indices sitting at the new max; residual ties take the lowest
    // index. The count only needs the old number of indices at `best` plus a
    // +-1 adjustment for the touched index.
    int eq_old = 0;
    for (int i = 0; i < first_zero; ++i) {
      if (a[i] * s[i] == best) ++eq_old;
    }
    int chosen = -1;
    int chosen_card = std::numeric_limits<int>::max();
    for (int i = 0; i <= last; ++i) {
      const double bumped = (a[i] + 1.0) * s[i];
      if (std::max(cur_loss, bumped) != best) continue;
      int card = eq_old;
      if (a[i] * s[i] == best) --card;
      if (bumped == best) ++card;
      if (card < chosen_card) {
        chosen_card = card;
        chosen = i;
      }
    }

    a[chosen] += 1;
    cur_loss = best;
    if (chosen == first_zero) ++first_zero;
  }

  AllocationVector out(n, 0);
  for (int i = 0; i < m; ++i) out[order[i]] = a[i];
  return out;
}

namespace {

double binomial(int top, int bottom) {
  double value = 1.0;
  for (int i = 1; i <= bottom; ++i) {
    value *= static_cast<double>(top - bottom + i) / i;
    if (value > 1e18) return value;
  }
  return value;
}

struct BruteState {
  const ScoreVector* scores;
  AllocationVector current;
  BruteForceResult best;
};

void enumerate(BruteState& st, std::size_t index, int remaining) {
  const std::size_t n = st.scores->size();
  if (index + 1 == n) {
    st.current[index] = remaining;
    const double loss = proxy_loss(st.current, *st.scores);
    int card = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (st.current[i] * (*st.scores)[i] == loss) ++card;
    }
    if (loss < st.best.loss ||
        (loss == st.best.loss && card < st.best.argmax_cardinality)) {
      st.best.loss = loss;
      st.best.argmax_cardinality = card;
      st.best.alloc = st.current;
    }
    return;
  }
  for (int units = remaining; units >= 0; --units) {
    st.current[index] = units;
    enumerate(st, index + 1, remaining - units);
  }
}

}  // namespace

BruteForceResult brute_force_opt(const ScoreVector& scores, int budget) {
  const int n = static_cast<int>(scores.size());
  require(n >= 1, "brute_force_opt: empty score vector");
  require(budget >= 1, "brute_force_opt: budget must be at least 1");
  if (binomial(n + budget - 1, budget) > 1e7) {
    throw std::invalid_argument("brute_force_opt: instance too large to enumerate");
  }
  BruteState st;
  st.scores = &scores;
  st.current.assign(n, 0);
  st.best.loss = kInf;
  st.best.argmax_cardinality = std::numeric_limits<int>::max();
  enumerate(st, 0, budget);
  return st.best;
}

double conf_width(double alpha, std::int64_t round_k, std::int64_t usage_count) {
  require(round_k >= 1, "conf_width: round index starts at 1");
  if (usage_count == 0) return kInf;
  const double ratio = log_2k2(round_k) / static_cast<double>(usage_count);
  return 2.0 * alpha * (std::sqrt(ratio) + ratio);
}

ScoreVector lcb_additive(const AllocatorState& state, double alpha) {
  const int n = state.size();
  ScoreVector scores(n, 0.0);
  for (int i = 0; i < n; ++i) {
    if (state.usage_counts[i] == 0) continue;  // conf is infinite, clips to zero
    const double width = conf_width(alpha, state.round_index, state.usage_counts[i]);
    scores[i] = std::max(0.0, state.empirical_means[i] - width);
  }
  return scores;
}

ScoreVector lcb_empirical(const AllocatorState& state, double eta) {
  const int n = state.size();
  ScoreVector scores(n, 0.0);
  for (int i = 0; i < n; ++i) {
    if (state.usage_counts[i] == 0) continue;
    const double ratio =
        log_2k2(state.round_index) / static_cast<double>(state.usage_counts[i]);
    const double bracket = 1.0 - 2.0 * eta * (std::sqrt(ratio) + ratio);
    scores[i] = state.empirical_means[i] * std::max(0.0, bracket);
  }
  return scores;
}

Policy Policy::ata(double alpha) {
  require(alpha > 0.0, "policy: ata requires alpha > 0");
  return Policy{Kind::ATA, alpha, 0.0};
}

Policy Policy::ata_empirical(double eta) {
  require(eta > 0.0, "policy: ata_empirical requires eta > 0");
  return Policy{Kind::ATAEmpirical, 0.0, eta};
}

const char* Policy::name() const {
  switch (kind) {
    case Kind::ATA: return "ata";
    case Kind::ATAEmpirical: return "ata_empirical";
    case Kind::OFTA: return "ofta";
    case Kind::UTA: return "uta";
    case Kind::GTA: return "gta";
  }
  return "unknown";
}

namespace {

// Budget spread evenly over the given arms; the remainder lands on a window
// that rotates with the round index so no arm is systematically favored.
AllocationVector uniform_over(const std::vector<int>& arms, int n, int budget,
                              std::int64_t round_index) {
  const int z = static_cast<int>(arms.size());
  AllocationVector a(n, 0);
  const int each = budget / z;
  const int remainder = budget % z;
  for (int arm : arms) a[arm] = each;
  const int offset = static_cast<int>((round_index - 1) % z);
  for (int t = 0; t < remainder; ++t) {
    a[arms[(offset + t) % z]] += 1;
  }
  return a;
}

AllocationVector uta_allocation(int n, int budget, Rng& rng) {
  AllocationVector a(n, 0);
  if (n > budget) {
    // B distinct workers, one task each.
    std::vector<int> pool(n);
    std::iota(pool.begin(), pool.end(), 0);
    for (int t = 0; t < budget; ++t) {
      const int pick = t + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - t)));
      std::swap(pool[t], pool[pick]);
      a[pool[t]] = 1;
    }
    return a;
  }
  const int each = budget / n;
  const int remainder = budget % n;
  for (int i = 0; i < n; ++i) a[i] = each;
  std::vector<int> pool(n);
  std::iota(pool.begin(), pool.end(), 0);
  for (int t = 0; t < remainder; ++t) {
    const int pick = t + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - t)));
    std::swap(pool[t], pool[pick]);
    a[pool[t]] += 1;
  }
  return a;
}

}  // namespace

AllocationVector choose_allocation(const Policy& policy, const AllocatorState& state,
                                   const FleetSpec& fleet, int budget, Rng& rng) {
  const int n = fleet.size();
  require(budget >= 1, "choose_allocation: budget must be at least 1");
  switch (policy.kind) {
    case Policy::Kind::ATA:
    case Policy::Kind::ATAEmpirical: {
      require(state.size() == n, "choose_allocation: state/fleet size mismatch");
      const ScoreVector scores = policy.kind == Policy::Kind::ATA
                                     ? lcb_additive(state, policy.alpha)
                                     : lcb_empirical(state, policy.eta);
      std::vector<int> zero_arms;
      for (int i = 0; i < n; ++i) {
        if (scores[i] == 0.0) zero_arms.push_back(i);
      }
      if (!zero_arms.empty()) {
        return uniform_over(zero_arms, n, budget, state.round_index);
      }
      return ras(scores, budget);
    }
    case Policy::Kind::OFTA:
      return ras(fleet.means(), budget);
    case Policy::Kind::UTA:
      return uta_allocation(n, budget, rng);
    case Policy::Kind::GTA:
      throw std::logic_error("choose_allocation: greedy rounds are event-driven");
  }
  throw std::logic_error("choose_allocation: unhandled policy");
}

void update_state(AllocatorState& state, const AllocationVector& a,
                  const std::vector<std::vector<double>>& times_by_arm) {
  const int n = state.size();
  require(static_cast<int>(a.size()) == n, "update_state: allocation size mismatch");
  require(static_cast<int>(times_by_arm.size()) == n,
          "update_state: feedback size mismatch");
  for (int i = 0; i < n; ++i) {
    if (a[i] == 0) {
      require(times_by_arm[i].empty(), "update_state: feedback for unallocated arm");
      continue;
    }
    require(static_cast<int>(times_by_arm[i].size()) == a[i],
            "update_state: feedback count must match the allocation");
    double sum = 0.0;
    for (double t : times_by_arm[i]) sum += t;
    state.usage_counts[i] += a[i];
    state.usage_times[i] += sum;
    state.empirical_means[i] =
        state.usage_times[i] / static_cast<double>(state.usage_counts[i]);
  }
  state.round_index += 1;
}

int overallocation_gap(double ell_bar, int a_bar_i, double mu_i) {
  require(mu_i > 0.0, "overallocation_gap: mean must be positive");
  for (int k = 1; k <= 2; ++k) {
    if ((a_bar_i + k) * mu_i > ell_bar) return k;
  }
  throw std::logic_error(
      "overallocation_gap: gap above 2 signals a broken minimizer output");
}

double cumulative_regret(const std::vector<AllocationVector>& history,
                         const FleetSpec& fleet, int budget) {
  const ScoreVector mu = fleet.means();
  const double ell_bar = proxy_loss(ras(mu, budget), mu);
  double total = 0.0;
  for (const auto& a : history) total += proxy_loss(a, mu) - ell_bar;
  return total;
}

}  // namespace ata
