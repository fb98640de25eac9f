#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "ata/allocation.hpp"
#include "ata/distributions.hpp"
#include "ata/optimizer.hpp"

namespace ata {

// Per-round metrics emitted by the simulation loop. Round time follows the
// barrier model: the maximum over supported workers of that worker's summed
// task times. Suboptimality is NaN when no optimizer is attached.
struct RoundRecord {
  std::int64_t round = 0;
  double round_time = 0.0;
  double cum_runtime = 0.0;
  double worker_time_increment = 0.0;
  double cum_worker_time = 0.0;
  double proxy_loss_value = 0.0;
  double cum_regret = 0.0;
  double suboptimality = 0.0;
};

struct GreedyTrace {
  std::vector<std::pair<int, double>> completion_events;  // (worker, time), sorted
  int tasks_completed = 0;
};

struct StaticRoundResult {
  double round_time = 0.0;
  double worker_time = 0.0;
};

// Realize one synchronous round for a fixed allocation: each supported worker
// runs its tasks back to back, the round ends when the slowest one finishes.
// Observed per-task times land in times_by_arm (resized and cleared here) for
// the allocator update. Task times come from the (seed, arm, round) stream.
StaticRoundResult run_static_round(const AllocationVector& a, const FleetSpec& fleet,
                                   std::uint64_t master_seed, std::int64_t round,
                                   std::vector<std::vector<double>>& times_by_arm);

struct GreedyRoundResult {
  double round_time = 0.0;
  double worker_time = 0.0;              // all workers busy until the cutoff
  AllocationVector completed_counts;     // completions per worker, sums to B
};

// Event-driven greedy round: every worker starts a task at time zero and
// immediately starts another on completion; the round stops at the B-th
// completion. Abandoned in-progress work still counts as worker usage, so
// worker time is n times the cutoff.
GreedyRoundResult run_greedy_round(const FleetSpec& fleet, int budget,
                                   std::uint64_t master_seed, std::int64_t round,
                                   GreedyTrace* trace = nullptr);

// Bandit-only prior rounds: allocate, observe, update, discard the metrics.
// Advances state.round_index by prior_rounds.
void warm_start(AllocatorState& state, const FleetSpec& fleet, const Policy& policy,
                int budget, std::int64_t prior_rounds, std::uint64_t master_seed);

struct StopRule {
  std::int64_t max_rounds = 1000;
  std::optional<double> suboptimality_threshold;
};

struct OptimizerSettings {
  bool enabled = false;
  int dimension = 100;
  std::optional<double> step_size;  // default 1 / lambda_max
  double sigma = 0.01;
};

// Everything run_experiment needs; the cli layer builds this from a config
// file and attaches seeds.
struct ExperimentSpec {
  FleetSpec fleet;
  Policy policy;
  int budget = 1;
  StopRule stop;
  OptimizerSettings optimizer;
  std::int64_t warm_start_rounds = 0;
};

struct RunSummary {
  std::int64_t rounds_run = 0;
  bool threshold_crossed = false;
  std::int64_t threshold_round = -1;
  double runtime_at_threshold = 0.0;
  double worker_time_at_threshold = 0.0;
  double final_cum_runtime = 0.0;
  double final_cum_worker_time = 0.0;
  double final_cum_regret = 0.0;
  double final_suboptimality = 0.0;
};

using RoundSink = std::function<void(const RoundRecord&, const AllocationVector&)>;

// Drives the full virtual-time loop for one (spec, seed) cell: choose an
// allocation (or run the greedy race), realize task times, take one SGD step
// on the collected batch when the optimizer is attached, feed the observed
// times back to learning policies, and emit one record per round. Fully
// deterministic in (spec, seed).
RunSummary run_experiment(const ExperimentSpec& spec, std::uint64_t seed,
                          const RoundSink& sink = nullptr);

}  // namespace ata
