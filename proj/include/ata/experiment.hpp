#pragma once

#include <string>
#include <vector>

#include "ata/config.hpp"
#include "ata/simulator.hpp"

namespace ata {

struct SuiteOptions {
  std::string out_dir;   // empty disables CSV output
  int parallelism = 1;   // seeds of one config may run concurrently
};

struct CellResult {
  std::string config_name;
  std::string policy_name;
  int n = 0;
  int budget = 0;
  Family family = Family::Custom;
  std::uint64_t seed = 0;
  RunSummary summary;
};

struct SuiteResult {
  std::vector<CellResult> cells;  // config-major, seeds in config order
  std::vector<std::string> csv_paths;
};

// Runs every (config, seed) cell. With an out_dir set, writes one CSV per
// cell plus one aggregate CSV per config (per-round mean and standard
// deviation over seeds, accumulated in seed order so output bytes do not
// depend on scheduling). Files are written to a temp path and renamed.
SuiteResult run_suite(const std::vector<ExperimentConfig>& configs,
                      const SuiteOptions& options);

struct SummaryRow {
  std::string config_name;
  std::string policy;
  int n = 0;
  double worker_time_ratio = 0.0;  // greedy worker time / policy worker time
  double runtime_ratio = 0.0;      // policy runtime / greedy runtime
  double mean_rounds_to_threshold = 0.0;
  bool flagged = false;
  std::string note;
};

struct SummaryTable {
  std::vector<SummaryRow> rows;
  bool any_flagged = false;
};

// Threshold-crossing ratios against the greedy baseline of the same
// (family, n, B) group, per seed, averaged over seeds. Cells that never
// crossed the threshold or lack a greedy counterpart come back flagged.
SummaryTable table_ratios(const SuiteResult& result);

std::string render_summary(const SummaryTable& table);
void write_summary_files(const SummaryTable& table, const std::string& out_dir);

// Atomic text file write (temp file + rename).
void write_text_file(const std::string& path, const std::string& content);

}  // namespace ata
