#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ata/config.hpp"
#include "ata/experiment.hpp"
#include "ata/selfcheck.hpp"

namespace fs = std::filesystem;

namespace {

struct CommonFlags {
  std::string out_dir = "out";
  int parallelism = 1;
  std::vector<std::uint64_t> seeds;
  double threshold = 0.0;
  bool threshold_set = false;
};

void apply_overrides(ata::ExperimentConfig& cfg, const CommonFlags& flags) {
  if (!flags.seeds.empty()) cfg.seeds = flags.seeds;
  if (flags.threshold_set) {
    cfg.stop.suboptimality_threshold = flags.threshold;
    if (!cfg.optimizer.enabled) {
      throw ata::ConfigError("config: --threshold needs the optimizer enabled");
    }
  }
}

std::vector<ata::ExperimentConfig> load_config_dir(const std::string& dir,
                                                   const CommonFlags& flags) {
  std::vector<std::string> paths;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() == ".json") paths.push_back(entry.path().string());
  }
  std::sort(paths.begin(), paths.end());
  if (paths.empty()) {
    throw ata::ConfigError("config: no .json files in " + dir);
  }
  std::vector<ata::ExperimentConfig> configs;
  for (const auto& path : paths) {
    configs.push_back(ata::load_config(path));
    apply_overrides(configs.back(), flags);
  }
  return configs;
}

int run_simulate(const std::string& config_path, const CommonFlags& flags) {
  ata::ExperimentConfig cfg = ata::load_config(config_path);
  apply_overrides(cfg, flags);

  ata::SuiteOptions options;
  options.out_dir = flags.out_dir;
  options.parallelism = flags.parallelism;
  const ata::SuiteResult result = ata::run_suite({cfg}, options);

  for (const auto& path : result.csv_paths) std::cout << "wrote " << path << "\n";
  for (const auto& cell : result.cells) {
    std::printf("%s seed=%llu rounds=%lld runtime=%.6g worker_time=%.6g",
                cell.config_name.c_str(), static_cast<unsigned long long>(cell.seed),
                static_cast<long long>(cell.summary.rounds_run),
                cell.summary.final_cum_runtime, cell.summary.final_cum_worker_time);
    if (cfg.stop.suboptimality_threshold) {
      if (cell.summary.threshold_crossed) {
        std::printf(" threshold_round=%lld",
                    static_cast<long long>(cell.summary.threshold_round));
      } else {
        std::printf(" threshold_not_reached");
      }
    }
    std::printf("\n");
  }

  if (cfg.stop.suboptimality_threshold) {
    bool missed = false;
    for (const auto& cell : result.cells) {
      missed = missed || !cell.summary.threshold_crossed;
    }
    if (missed) {
      std::cerr << "error: some seed never reached the stopping threshold\n";
      return 2;
    }
  }
  return 0;
}

int run_table(const std::string& config_dir, const CommonFlags& flags) {
  const std::vector<ata::ExperimentConfig> configs = load_config_dir(config_dir, flags);
  ata::SuiteOptions options;
  options.out_dir = flags.out_dir;
  options.parallelism = flags.parallelism;
  const ata::SuiteResult result = ata::run_suite(configs, options);
  const ata::SummaryTable table = ata::table_ratios(result);
  std::cout << ata::render_summary(table);
  if (!flags.out_dir.empty()) {
    ata::write_summary_files(table, flags.out_dir);
    std::cout << "wrote " << flags.out_dir << "/summary.csv and summary.txt\n";
  }
  return table.any_flagged ? 2 : 0;
}

int run_regret(const std::string& config_path, const CommonFlags& flags) {
  ata::ExperimentConfig cfg = ata::load_config(config_path);
  apply_overrides(cfg, flags);
  if (!cfg.policy.is_learning()) {
    std::cerr << "regret: config should use a learning policy (ata or ata_empirical)\n";
  }

  ata::SuiteOptions options;
  options.out_dir = flags.out_dir;
  options.parallelism = flags.parallelism;
  const ata::SuiteResult result = ata::run_suite({cfg}, options);
  for (const auto& path : result.csv_paths) std::cout << "wrote " << path << "\n";

  // Checkpoint view of regret growth: cumulative regret divided by ln k at
  // each decade, averaged over seeds, flat when the growth is logarithmic.
  std::vector<std::int64_t> checkpoints;
  for (std::int64_t c = 10; c <= cfg.stop.max_rounds; c *= 10) checkpoints.push_back(c);
  std::vector<double> sums(checkpoints.size(), 0.0);

  const ata::ExperimentSpec spec = cfg.build_spec();
  for (const std::uint64_t seed : cfg.seeds) {
    std::size_t next = 0;
    ata::run_experiment(spec, seed,
                        [&](const ata::RoundRecord& r, const ata::AllocationVector&) {
                          if (next < checkpoints.size() && r.round == checkpoints[next]) {
                            sums[next] += r.cum_regret;
                            ++next;
                          }
                        });
  }
  std::printf("%-12s %-16s %-16s\n", "round", "mean_cum_regret", "regret/ln(round)");
  for (std::size_t i = 0; i < checkpoints.size(); ++i) {
    const double mean = sums[i] / static_cast<double>(cfg.seeds.size());
    std::printf("%-12lld %-16.6g %-16.6g\n", static_cast<long long>(checkpoints[i]),
                mean, mean / std::log(static_cast<double>(checkpoints[i])));
  }
  return 0;
}

int run_selftest(std::uint64_t seed) {
  bool all_passed = true;
  for (const auto& check : ata::run_all_checks(seed)) {
    std::printf("%-28s %s  (%s)\n", check.name.c_str(),
                check.passed ? "PASS" : "FAIL", check.detail.c_str());
    all_passed = all_passed && check.passed;
  }
  return all_passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Virtual-time simulator for adaptive task allocation policies"};
  app.require_subcommand(1);

  CommonFlags flags;

  auto add_common = [&flags](CLI::App* cmd) {
    cmd->add_option("--out-dir", flags.out_dir, "Directory for CSV output");
    cmd->add_option("--parallel", flags.parallelism, "Concurrent seeds per config")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--seed", flags.seeds, "Override the config's seed list");
    cmd->add_option("--threshold", flags.threshold,
                    "Override the suboptimality stopping threshold")
        ->check(CLI::PositiveNumber);
  };

  std::string config_path;
  std::string config_dir;
  std::uint64_t selftest_seed = 1;

  CLI::App* simulate = app.add_subcommand("simulate", "Run one experiment config");
  simulate->add_option("config", config_path, "Config file (JSON)")->required();
  add_common(simulate);

  CLI::App* table = app.add_subcommand(
      "table", "Run a directory of configs and print threshold-crossing ratios");
  table->add_option("config-dir", config_dir, "Directory of config files")->required();
  add_common(table);

  CLI::App* regret = app.add_subcommand("regret", "Run a config and report regret growth");
  regret->add_option("config", config_path, "Config file (JSON)")->required();
  add_common(regret);

  CLI::App* selftest =
      app.add_subcommand("selftest", "Run the allocator and concentration property checks");
  selftest->add_option("--seed", selftest_seed, "Seed for the generated instances");

  CLI11_PARSE(app, argc, argv);

  for (CLI::App* cmd : {simulate, table, regret}) {
    if (cmd->parsed() && cmd->count("--threshold") > 0) flags.threshold_set = true;
  }

  try {
    if (simulate->parsed()) return run_simulate(config_path, flags);
    if (table->parsed()) return run_table(config_dir, flags);
    if (regret->parsed()) return run_regret(config_path, flags);
    if (selftest->parsed()) return run_selftest(selftest_seed);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
