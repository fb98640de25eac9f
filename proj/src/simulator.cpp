#include "ata/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

namespace ata {

namespace {

void require(bool ok, const char* message) {
  if (!ok) throw std::invalid_argument(message);
}

}  // namespace

StaticRoundResult run_static_round(const AllocationVector& a, const FleetSpec& fleet,
                                   std::uint64_t master_seed, std::int64_t round,
                                   std::vector<std::vector<double>>& times_by_arm) {
  const int n = fleet.size();
  require(static_cast<int>(a.size()) == n, "run_static_round: allocation size mismatch");

  times_by_arm.resize(n);
  for (auto& v : times_by_arm) v.clear();

  StaticRoundResult result;
  for (int i = 0; i < n; ++i) {
    if (a[i] == 0) continue;
    Rng stream = make_stream(master_seed, stream_domain::kTaskTimes,
                             static_cast<std::uint64_t>(i),
                             static_cast<std::uint64_t>(round));
    double busy = 0.0;
    for (int u = 0; u < a[i]; ++u) {
      const double t = sample(fleet.arms[i], stream);
      times_by_arm[i].push_back(t);
      busy += t;
    }
    result.worker_time += busy;
    result.round_time = std::max(result.round_time, busy);
  }
  return result;
}

GreedyRoundResult run_greedy_round(const FleetSpec& fleet, int budget,
                                   std::uint64_t master_seed, std::int64_t round,
                                   GreedyTrace* trace) {
  const int n = fleet.size();
  require(budget >= 1, "run_greedy_round: budget must be at least 1");

  // Each worker draws from its own (arm, round) stream, so the sequence a
  // worker sees does not depend on how completions interleave.
  std::vector<Rng> streams;
  streams.reserve(n);
  for (int i = 0; i < n; ++i) {
    streams.push_back(make_stream(master_seed, stream_domain::kTaskTimes,
                                  static_cast<std::uint64_t>(i),
                                  static_cast<std::uint64_t>(round)));
  }

  // Min-heap on (completion time, worker); simultaneous completions resolve
  // by worker index ascending.
  using Event = std::pair<double, int>;
  std::priority_queue<Event, std::vector<Event>, std::greater<Event>> queue;
  for (int i = 0; i < n; ++i) {
    queue.emplace(sample(fleet.arms[i], streams[i]), i);
  }

  GreedyRoundResult result;
  result.completed_counts.assign(n, 0);
  if (trace) {
    trace->completion_events.clear();
    trace->tasks_completed = 0;
  }

  double cutoff = 0.0;
  for (int done = 0; done < budget; ++done) {
    const auto [time, worker] = queue.top();
    queue.pop();
    cutoff = time;
    result.completed_counts[worker] += 1;
    if (trace) trace->completion_events.emplace_back(worker, time);
    queue.emplace(time + sample(fleet.arms[worker], streams[worker]), worker);
  }

  result.round_time = cutoff;
  result.worker_time = static_cast<double>(n) * cutoff;
  if (trace) trace->tasks_completed = budget;
  return result;
}

void warm_start(AllocatorState& state, const FleetSpec& fleet, const Policy& policy,
                int budget, std::int64_t prior_rounds, std::uint64_t master_seed) {
  require(prior_rounds >= 0, "warm_start: prior rounds must be nonnegative");
  require(policy.kind != Policy::Kind::GTA, "warm_start: greedy policy learns nothing");
  std::vector<std::vector<double>> times_by_arm;
  for (std::int64_t p = 0; p < prior_rounds; ++p) {
    const std::int64_t k = state.round_index;
    Rng policy_rng = make_stream(master_seed, stream_domain::kPolicy,
                                 static_cast<std::uint64_t>(k));
    const AllocationVector a = choose_allocation(policy, state, fleet, budget, policy_rng);
    run_static_round(a, fleet, master_seed, k, times_by_arm);
    update_state(state, a, times_by_arm);
  }
}

RunSummary run_experiment(const ExperimentSpec& spec, std::uint64_t seed,
                          const RoundSink& sink) {
  const int n = spec.fleet.size();
  require(spec.budget >= 1, "run_experiment: budget must be at least 1");

  AllocatorState state(n);
  if (spec.warm_start_rounds > 0 && spec.policy.is_learning()) {
    warm_start(state, spec.fleet, spec.policy, spec.budget, spec.warm_start_rounds, seed);
  }

  const ScoreVector mu = spec.fleet.means();
  const double ell_bar = proxy_loss(ras(mu, spec.budget), mu);

  std::optional<QuadraticProblem> problem;
  GradientOracle oracle;
  std::vector<double> x;
  std::vector<double> grad_mean;
  double step_size = 0.0;
  if (spec.optimizer.enabled) {
    problem.emplace(spec.optimizer.dimension);
    oracle.sigma = spec.optimizer.sigma;
    x.assign(spec.optimizer.dimension, 0.0);
    step_size = spec.optimizer.step_size.value_or(1.0 / problem->lambda_max());
  }

  // OFTA plays one fixed allocation; compute it once.
  std::optional<AllocationVector> fixed_allocation;
  if (spec.policy.kind == Policy::Kind::OFTA) {
    fixed_allocation = ras(mu, spec.budget);
  }

  RunSummary summary;
  RoundRecord record;
  std::vector<std::vector<double>> times_by_arm;
  AllocationVector played;

  const std::int64_t first_round = state.round_index;
  const std::int64_t last_round = first_round + spec.stop.max_rounds - 1;
  for (std::int64_t k = first_round; k <= last_round; ++k) {
    double round_time = 0.0;
    double worker_time = 0.0;

    if (spec.policy.kind == Policy::Kind::GTA) {
      GreedyRoundResult greedy = run_greedy_round(spec.fleet, spec.budget, seed, k);
      round_time = greedy.round_time;
      worker_time = greedy.worker_time;
      played = std::move(greedy.completed_counts);
    } else {
      if (fixed_allocation) {
        played = *fixed_allocation;
      } else {
        Rng policy_rng = make_stream(seed, stream_domain::kPolicy,
                                     static_cast<std::uint64_t>(k));
        played = choose_allocation(spec.policy, state, spec.fleet, spec.budget,
                                   policy_rng);
      }
      const StaticRoundResult realized =
          run_static_round(played, spec.fleet, seed, k, times_by_arm);
      round_time = realized.round_time;
      worker_time = realized.worker_time;
    }

    if (problem) {
      Rng noise_rng = make_stream(seed, stream_domain::kGradientNoise,
                                  static_cast<std::uint64_t>(k));
      minibatch_grad_mean(*problem, oracle, spec.budget, x, noise_rng, grad_mean);
      for (std::size_t i = 0; i < x.size(); ++i) x[i] -= step_size * grad_mean[i];
    }

    if (spec.policy.is_learning()) {
      update_state(state, played, times_by_arm);
    } else {
      state.round_index += 1;  // keep the round clock shared across policies
    }

    record.round = k;
    record.round_time = round_time;
    record.cum_runtime += round_time;
    record.worker_time_increment = worker_time;
    record.cum_worker_time += worker_time;
    record.proxy_loss_value = proxy_loss(played, mu);
    record.cum_regret += record.proxy_loss_value - ell_bar;
    record.suboptimality =
        problem ? suboptimality(*problem, x) : std::numeric_limits<double>::quiet_NaN();

    if (sink) sink(record, played);

    summary.rounds_run = k - first_round + 1;
    if (!summary.threshold_crossed && spec.stop.suboptimality_threshold && problem &&
        record.suboptimality < *spec.stop.suboptimality_threshold) {
      summary.threshold_crossed = true;
      summary.threshold_round = summary.rounds_run;
      summary.runtime_at_threshold = record.cum_runtime;
      summary.worker_time_at_threshold = record.cum_worker_time;
      break;
    }
  }

  summary.final_cum_runtime = record.cum_runtime;
  summary.final_cum_worker_time = record.cum_worker_time;
  summary.final_cum_regret = record.cum_regret;
  summary.final_suboptimality = record.suboptimality;
  return summary;
}

}  // namespace ata
