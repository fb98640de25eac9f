#include <doctest.h>

#include <stdexcept>
#include <cmath>
#include <limits>

#include "ata/allocation.hpp"
#include "ata/rng.hpp"

using namespace ata;

namespace {

ScoreVector random_scores(Rng& rng, int n) {
  ScoreVector s(n);
  for (double& v : s) v = 10.0 * rng.uniform_open01();
  return s;
}

int argmax_cardinality(const AllocationVector& a, const ScoreVector& s) {
  const double loss = proxy_loss(a, s);
  int card = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] * s[i] == loss) ++card;
  }
  return card;
}

AllocatorState state_with(std::int64_t round, std::int64_t count, double mean) {
  AllocatorState state(1);
  state.round_index = round;
  state.usage_counts[0] = count;
  state.empirical_means[0] = mean;
  state.usage_times[0] = mean * static_cast<double>(count);
  return state;
}

}  // namespace

TEST_CASE("proxy loss is the max product") {
  CHECK(proxy_loss({3, 1, 0}, {1.0, 2.0, 3.0}) == 3.0);
  CHECK(proxy_loss({0, 0, 5}, {1.0, 2.0, 3.0}) == 15.0);
  CHECK(proxy_loss({1, 1}, {0.0, 7.0}) == 7.0);
  CHECK_THROWS_AS(proxy_loss({1, 2}, {1.0}), std::invalid_argument);
}

TEST_CASE("unit budget goes to the smallest score") {
  CHECK(ras({3.0, 1.0, 2.0}, 1) == AllocationVector{0, 1, 0});
}

TEST_CASE("symmetric split beats stacking") {
  const AllocationVector a = ras({1.0, 1.0}, 2);
  CHECK(a == AllocationVector{1, 1});
  CHECK(proxy_loss(a, {1.0, 1.0}) == 1.0);
}

TEST_CASE("three-score budget-four instance hits the exhaustive optimum") {
  const ScoreVector s = {1.0, 2.0, 3.0};
  const BruteForceResult reference = brute_force_opt(s, 4);
  CHECK(reference.loss == 3.0);
  CHECK(reference.argmax_cardinality == 1);
  const AllocationVector a = ras(s, 4);
  CHECK(a == AllocationVector{3, 1, 0});
  CHECK(proxy_loss(a, s) == reference.loss);
  CHECK(argmax_cardinality(a, s) == reference.argmax_cardinality);
}

TEST_CASE("scores must be strictly positive") {
  CHECK_THROWS_AS(ras({1.0, 0.0}, 2), std::invalid_argument);
  CHECK_THROWS_AS(ras({-1.0, 2.0}, 2), std::invalid_argument);
}

TEST_CASE("single arm takes the whole budget") {
  CHECK(ras({5.0}, 3) == AllocationVector{3});
  const BruteForceResult reference = brute_force_opt({5.0}, 3);
  CHECK(reference.alloc == AllocationVector{3});
  CHECK(reference.loss == 15.0);
}

TEST_CASE("symmetric three arms") {
  const BruteForceResult reference = brute_force_opt({1.0, 1.0, 1.0}, 3);
  CHECK(reference.loss == 1.0);
  CHECK(reference.alloc == AllocationVector{1, 1, 1});
}

TEST_CASE("brute force refuses oversized instances") {
  ScoreVector s(30, 1.0);
  CHECK_THROWS_AS(brute_force_opt(s, 30), std::invalid_argument);
}

TEST_CASE("minimizer matches brute force on random small instances") {
  Rng rng = make_stream(2024, stream_domain::kTest, 50);
  for (int t = 0; t < 2000; ++t) {
    const int n = 1 + static_cast<int>(rng.below(6));
    const int budget = 1 + static_cast<int>(rng.below(6));
    const ScoreVector s = random_scores(rng, n);
    const AllocationVector a = ras(s, budget);
    CHECK(allocation_total(a) == budget);
    const BruteForceResult reference = brute_force_opt(s, budget);
    CHECK(proxy_loss(a, s) == reference.loss);
    CHECK(argmax_cardinality(a, s) == reference.argmax_cardinality);
  }
}

TEST_CASE("pairwise balance holds on random instances") {
  Rng rng = make_stream(2024, stream_domain::kTest, 51);
  for (int t = 0; t < 2000; ++t) {
    const int n = 1 + static_cast<int>(rng.below(8));
    const int budget = 1 + static_cast<int>(rng.below(12));
    const ScoreVector s = random_scores(rng, n);
    const AllocationVector a = ras(s, budget);
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        CHECK(a[j] * s[j] <= (a[i] + 1.0) * s[i]);
      }
    }
  }
}

TEST_CASE("tied scores still reach the optimum with minimal max-cardinality") {
  // Discrete score grids force exact product ties, the case the
  // smallest-argmax selection exists for.
  Rng rng = make_stream(2024, stream_domain::kTest, 55);
  for (int t = 0; t < 3000; ++t) {
    const int n = 1 + static_cast<int>(rng.below(6));
    const int budget = 1 + static_cast<int>(rng.below(6));
    ScoreVector s(n);
    for (double& v : s) v = 0.5 * (1.0 + static_cast<double>(rng.below(4)));
    const AllocationVector a = ras(s, budget);
    const BruteForceResult reference = brute_force_opt(s, budget);
    INFO("scores " << s[0] << (n > 1 ? s[1] : 0.0) << " budget " << budget);
    CHECK(proxy_loss(a, s) == reference.loss);
    CHECK(argmax_cardinality(a, s) == reference.argmax_cardinality);
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        CHECK(a[j] * s[j] <= (a[i] + 1.0) * s[i]);
      }
    }
  }
}

TEST_CASE("scaling the scores leaves the allocation unchanged") {
  Rng rng = make_stream(2024, stream_domain::kTest, 52);
  for (int t = 0; t < 500; ++t) {
    const int n = 1 + static_cast<int>(rng.below(8));
    const int budget = 1 + static_cast<int>(rng.below(10));
    const ScoreVector s = random_scores(rng, n);
    const AllocationVector base = ras(s, budget);
    for (const double c : {0.25, 2.0, 3.0, 1048576.0}) {
      ScoreVector scaled(s);
      for (double& v : scaled) v *= c;
      CHECK(ras(scaled, budget) == base);
    }
  }
}

TEST_CASE("width formula and unobserved sentinel") {
  CHECK(conf_width(1.0, 1, 0) == std::numeric_limits<double>::infinity());
  CHECK(conf_width(1.0, 1, 1) == doctest::Approx(3.051403583435286).epsilon(1e-12));
  CHECK(conf_width(2.0, 10, 4) == doctest::Approx(9.901932192550767).epsilon(1e-9));
  CHECK_THROWS_AS(conf_width(1.0, 0, 1), std::invalid_argument);
}

TEST_CASE("additive lower bound clips at zero") {
  // width ~9.9 exceeds the mean estimate 5
  CHECK(lcb_additive(state_with(10, 4, 5.0), 2.0)[0] == 0.0);
  // mean 10 minus width ~3.0514
  CHECK(lcb_additive(state_with(1, 1, 10.0), 1.0)[0] ==
        doctest::Approx(6.948596416564714).epsilon(1e-12));
  // unobserved arm scores zero
  CHECK(lcb_additive(state_with(5, 0, 0.0), 1.0)[0] == 0.0);
}

TEST_CASE("multiplicative lower bound") {
  CHECK(lcb_empirical(state_with(10, 100, 10.0), 1.0)[0] ==
        doctest::Approx(4.336721700687662).epsilon(1e-9));
  CHECK(lcb_empirical(state_with(10, 100, 10.0), 50.0)[0] == 0.0);
  CHECK(lcb_empirical(state_with(10, 100, 10.0), 0.0)[0] == 10.0);
  CHECK(lcb_empirical(state_with(10, 0, 0.0), 1.0)[0] == 0.0);
}

TEST_CASE("both bounds are monotone in the sample count") {
  for (const bool additive : {true, false}) {
    double previous = -1.0;
    for (std::int64_t count = 1; count <= 200; ++count) {
      const AllocatorState state = state_with(10, count, 10.0);
      const double score = additive ? lcb_additive(state, 1.5)[0]
                                    : lcb_empirical(state, 1.5)[0];
      CHECK(score >= previous);
      previous = score;
    }
  }
}

TEST_CASE("state update follows the observed times") {
  AllocatorState state(2);

  SUBCASE("counts, times and means accumulate") {
    update_state(state, {2, 0}, {{3.0, 5.0}, {}});
    CHECK(state.usage_counts[0] == 2);
    CHECK(state.usage_times[0] == 8.0);
    CHECK(state.empirical_means[0] == 4.0);
    CHECK(state.round_index == 2);
    // untouched arm
    CHECK(state.usage_counts[1] == 0);
    CHECK(state.empirical_means[1] == 0.0);
  }

  SUBCASE("running mean over two rounds") {
    update_state(state, {3, 0}, {{10.0, 10.0, 10.0}, {}});
    update_state(state, {1, 0}, {{10.0}, {}});
    CHECK(state.usage_counts[0] == 4);
    CHECK(state.empirical_means[0] == 10.0);
  }

  SUBCASE("feedback must match the allocation") {
    CHECK_THROWS_AS(update_state(state, {2, 0}, {{3.0}, {}}), std::invalid_argument);
    CHECK_THROWS_AS(update_state(state, {0, 0}, {{3.0}, {}}), std::invalid_argument);
  }
}

TEST_CASE("fresh learning state spreads the budget uniformly") {
  const FleetSpec fleet = make_fleet(Family::SqrtExp, 4);
  AllocatorState state(4);
  Rng rng(1);
  const AllocationVector a =
      choose_allocation(Policy::ata(1.0), state, fleet, 8, rng);
  CHECK(a == AllocationVector{2, 2, 2, 2});
}

TEST_CASE("zero-score remainder rotates with the round index") {
  const FleetSpec fleet = make_fleet(Family::SqrtExp, 4);
  Rng rng(1);
  AllocatorState state(4);
  state.round_index = 1;
  CHECK(choose_allocation(Policy::ata(1.0), state, fleet, 6, rng) ==
        AllocationVector{2, 2, 1, 1});
  state.round_index = 2;
  CHECK(choose_allocation(Policy::ata(1.0), state, fleet, 6, rng) ==
        AllocationVector{1, 2, 2, 1});
}

TEST_CASE("oracle fixed policy plays the optimum of the true means") {
  const FleetSpec fleet = make_fleet(
      {ArmModel::deterministic(1.0), ArmModel::deterministic(2.0)});
  AllocatorState state(2);
  Rng rng(1);
  const AllocationVector a = choose_allocation(Policy::ofta(), state, fleet, 3, rng);
  CHECK(a == AllocationVector{2, 1});
  CHECK(proxy_loss(a, fleet.means()) == 2.0);
  CHECK(brute_force_opt(fleet.means(), 3).loss == 2.0);
}

TEST_CASE("uniform policy splits floor plus random remainder") {
  const FleetSpec fleet = make_fleet(Family::SqrtExp, 10);
  AllocatorState state(10);
  Rng rng = make_stream(9, stream_domain::kPolicy, 1);
  const AllocationVector a = choose_allocation(Policy::uta(), state, fleet, 23, rng);
  CHECK(allocation_total(a) == 23);
  int threes = 0;
  for (int v : a) {
    CHECK(v >= 2);
    CHECK(v <= 3);
    threes += v == 3;
  }
  CHECK(threes == 3);
}

TEST_CASE("uniform policy with more workers than budget picks distinct singles") {
  const FleetSpec fleet = make_fleet(Family::SqrtExp, 40);
  AllocatorState state(40);
  Rng rng = make_stream(9, stream_domain::kPolicy, 2);
  const AllocationVector a = choose_allocation(Policy::uta(), state, fleet, 23, rng);
  CHECK(allocation_total(a) == 23);
  int singles = 0;
  for (int v : a) {
    CHECK(v <= 1);
    singles += v == 1;
  }
  CHECK(singles == 23);
}

TEST_CASE("greedy policy has no static allocation") {
  const FleetSpec fleet = make_fleet(Family::SqrtExp, 4);
  AllocatorState state(4);
  Rng rng(1);
  CHECK_THROWS_AS(choose_allocation(Policy::gta(), state, fleet, 8, rng),
                  std::logic_error);
}

TEST_CASE("every policy output conserves the budget") {
  const FleetSpec fleet = make_fleet(Family::ExpOnly, 7);
  Rng rng = make_stream(17, stream_domain::kTest, 60);
  for (const Policy& policy : {Policy::ata(4.0), Policy::ata_empirical(1.0),
                               Policy::ofta(), Policy::uta()}) {
    AllocatorState state(7);
    for (int round = 0; round < 50; ++round) {
      const AllocationVector a = choose_allocation(policy, state, fleet, 11, rng);
      CHECK(allocation_total(a) == 11);
      std::vector<std::vector<double>> times(7);
      for (int i = 0; i < 7; ++i) {
        for (int u = 0; u < a[i]; ++u) {
          times[i].push_back(fleet.arms[i].mean * (0.5 + rng.uniform01()));
        }
      }
      update_state(state, a, times);
    }
  }
}

TEST_CASE("over-allocation gap on a tiny oracle instance") {
  // means (1, 2), budget 3: optimum (2, 1) with value 2
  const ScoreVector mu = {1.0, 2.0};
  const AllocationVector a_bar = ras(mu, 3);
  REQUIRE(a_bar == AllocationVector{2, 1});
  const double ell_bar = proxy_loss(a_bar, mu);
  CHECK(ell_bar == 2.0);
  CHECK(overallocation_gap(ell_bar, a_bar[0], mu[0]) == 1);
  CHECK(overallocation_gap(ell_bar, a_bar[1], mu[1]) == 1);
}

TEST_CASE("single arm gap is one") {
  for (int budget = 1; budget <= 6; ++budget) {
    const double mu = 3.5;
    CHECK(overallocation_gap(budget * mu, budget, mu) == 1);
  }
}

TEST_CASE("gap stays in {1, 2} over random minimizer outputs") {
  Rng rng = make_stream(77, stream_domain::kTest, 61);
  for (int t = 0; t < 2000; ++t) {
    const int n = 1 + static_cast<int>(rng.below(6));
    const int budget = 1 + static_cast<int>(rng.below(6));
    const ScoreVector mu = random_scores(rng, n);
    const AllocationVector a_bar = ras(mu, budget);
    const double ell_bar = proxy_loss(a_bar, mu);
    for (int i = 0; i < n; ++i) {
      const int gap = overallocation_gap(ell_bar, a_bar[i], mu[i]);
      CHECK(gap >= 1);
      CHECK(gap <= 2);
    }
  }
}

TEST_CASE("cumulative regret of optimal play is zero") {
  const FleetSpec fleet = make_fleet(
      {ArmModel::deterministic(1.0), ArmModel::deterministic(2.0)});
  const AllocationVector a_bar = ras(fleet.means(), 3);
  std::vector<AllocationVector> history(100, a_bar);
  CHECK(cumulative_regret(history, fleet, 3) == 0.0);

  // one suboptimal round with value 3 instead of 2
  history.push_back({3, 0});
  CHECK(cumulative_regret(history, fleet, 3) == 1.0);
}
