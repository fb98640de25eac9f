#include "ata/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace ata {

namespace fs = std::filesystem;

namespace {

std::string format_value(double v) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.12g", v);
  return buffer;
}

constexpr const char* kCsvHeader =
    "round,round_time,cum_runtime,cum_worker_time,proxy_loss,cum_regret,suboptimality\n";

void append_row(std::string& out, const RoundRecord& r) {
  out += std::to_string(r.round);
  out += ',';
  out += format_value(r.round_time);
  out += ',';
  out += format_value(r.cum_runtime);
  out += ',';
  out += format_value(r.cum_worker_time);
  out += ',';
  out += format_value(r.proxy_loss_value);
  out += ',';
  out += format_value(r.cum_regret);
  out += ',';
  out += format_value(r.suboptimality);
  out += '\n';
}

// Column-per-metric series kept only while an aggregate CSV is requested.
struct MetricSeries {
  std::vector<double> round_time, cum_runtime, cum_worker_time, proxy_loss,
      cum_regret, suboptimality;

  void push(const RoundRecord& r) {
    round_time.push_back(r.round_time);
    cum_runtime.push_back(r.cum_runtime);
    cum_worker_time.push_back(r.cum_worker_time);
    proxy_loss.push_back(r.proxy_loss_value);
    cum_regret.push_back(r.cum_regret);
    suboptimality.push_back(r.suboptimality);
  }
  std::size_t rounds() const { return round_time.size(); }
};

const std::vector<double>& series_column(const MetricSeries& s, int metric) {
  switch (metric) {
    case 0: return s.round_time;
    case 1: return s.cum_runtime;
    case 2: return s.cum_worker_time;
    case 3: return s.proxy_loss;
    case 4: return s.cum_regret;
    default: return s.suboptimality;
  }
}

constexpr const char* kMetricNames[6] = {"round_time",      "cum_runtime",
                                         "cum_worker_time", "proxy_loss",
                                         "cum_regret",      "suboptimality"};

std::string aggregate_csv(const std::vector<MetricSeries>& per_seed) {
  std::string out = "round,seed_count";
  for (const char* name : kMetricNames) {
    out += ",mean_";
    out += name;
    out += ",std_";
    out += name;
  }
  out += '\n';

  std::size_t max_rounds = 0;
  for (const auto& s : per_seed) max_rounds = std::max(max_rounds, s.rounds());

  for (std::size_t r = 0; r < max_rounds; ++r) {
    int count = 0;
    for (const auto& s : per_seed) {
      if (r < s.rounds()) ++count;
    }
    out += std::to_string(r + 1);
    out += ',';
    out += std::to_string(count);
    for (int metric = 0; metric < 6; ++metric) {
      double sum = 0.0;
      double sumsq = 0.0;
      for (const auto& s : per_seed) {
        if (r >= s.rounds()) continue;
        const double v = series_column(s, metric)[r];
        sum += v;
        sumsq += v * v;
      }
      const double mean = sum / count;
      const double variance = std::isnan(mean)
                                  ? mean
                                  : std::max(0.0, sumsq / count - mean * mean);
      out += ',';
      out += format_value(mean);
      out += ',';
      out += format_value(std::sqrt(variance));
    }
    out += '\n';
  }
  return out;
}

std::string group_key(const CellResult& cell) {
  return family_name(cell.family) + "/n=" + std::to_string(cell.n) +
         "/B=" + std::to_string(cell.budget);
}

}  // namespace

void write_text_file(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp);
    out << content;
  }
  fs::rename(tmp, path);
}

SuiteResult run_suite(const std::vector<ExperimentConfig>& configs,
                      const SuiteOptions& options) {
  SuiteResult result;
  const bool write_csv = !options.out_dir.empty();
  if (write_csv) fs::create_directories(options.out_dir);

  for (const auto& cfg : configs) {
    const ExperimentSpec spec = cfg.build_spec();
    const std::size_t seed_count = cfg.seeds.size();
    std::vector<RunSummary> summaries(seed_count);
    std::vector<MetricSeries> series(write_csv ? seed_count : 0);
    std::vector<std::string> paths(seed_count);

    std::atomic<std::size_t> cursor{0};
    std::exception_ptr error;
    std::mutex error_mutex;

    auto worker = [&]() {
      for (;;) {
        const std::size_t idx = cursor.fetch_add(1);
        if (idx >= seed_count) return;
        try {
          const std::uint64_t seed = cfg.seeds[idx];
          std::string csv;
          RoundSink sink;
          if (write_csv) {
            csv = kCsvHeader;
            sink = [&csv, &series, idx](const RoundRecord& r, const AllocationVector&) {
              append_row(csv, r);
              series[idx].push(r);
            };
          }
          summaries[idx] = run_experiment(spec, seed, sink);
          if (write_csv) {
            const std::string path = options.out_dir + "/" + cfg.name + "_seed" +
                                     std::to_string(seed) + ".csv";
            write_text_file(path, csv);
            paths[idx] = path;
          }
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          return;
        }
      }
    };

    const int threads =
        std::max(1, std::min<int>(options.parallelism, static_cast<int>(seed_count)));
    if (threads == 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      pool.reserve(threads);
      for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
      for (auto& t : pool) t.join();
    }
    if (error) std::rethrow_exception(error);

    for (std::size_t idx = 0; idx < seed_count; ++idx) {
      CellResult cell;
      cell.config_name = cfg.name;
      cell.policy_name = cfg.policy.name();
      cell.n = cfg.n;
      cell.budget = cfg.budget;
      cell.family = cfg.family;
      cell.seed = cfg.seeds[idx];
      cell.summary = summaries[idx];
      result.cells.push_back(std::move(cell));
      if (write_csv && !paths[idx].empty()) result.csv_paths.push_back(paths[idx]);
    }

    if (write_csv) {
      const std::string path = options.out_dir + "/" + cfg.name + "_aggregate.csv";
      write_text_file(path, aggregate_csv(series));
      result.csv_paths.push_back(path);
    }
  }
  return result;
}

SummaryTable table_ratios(const SuiteResult& result) {
  SummaryTable table;

  // Greedy baselines per group, keyed by seed.
  std::map<std::string, std::map<std::uint64_t, const CellResult*>> baselines;
  for (const auto& cell : result.cells) {
    if (cell.policy_name == std::string("gta")) {
      baselines[group_key(cell)][cell.seed] = &cell;
    }
  }

  // Preserve first-seen config order.
  std::vector<std::string> config_order;
  std::map<std::string, std::vector<const CellResult*>> by_config;
  for (const auto& cell : result.cells) {
    auto& bucket = by_config[cell.config_name];
    if (bucket.empty()) config_order.push_back(cell.config_name);
    bucket.push_back(&cell);
  }

  for (const auto& name : config_order) {
    const auto& cells = by_config[name];
    SummaryRow row;
    row.config_name = name;
    row.policy = cells.front()->policy_name;
    row.n = cells.front()->n;

    const auto group = baselines.find(group_key(*cells.front()));
    double wt_ratio_sum = 0.0;
    double rt_ratio_sum = 0.0;
    double rounds_sum = 0.0;
    int counted = 0;
    for (const CellResult* cell : cells) {
      if (!cell->summary.threshold_crossed) {
        row.flagged = true;
        row.note = "seed " + std::to_string(cell->seed) + " never crossed the threshold";
        continue;
      }
      if (group == baselines.end() || !group->second.count(cell->seed)) {
        row.flagged = true;
        row.note = "no greedy baseline for seed " + std::to_string(cell->seed);
        continue;
      }
      const CellResult* base = group->second.at(cell->seed);
      if (!base->summary.threshold_crossed) {
        row.flagged = true;
        row.note = "greedy baseline never crossed the threshold";
        continue;
      }
      wt_ratio_sum += base->summary.worker_time_at_threshold /
                      cell->summary.worker_time_at_threshold;
      rt_ratio_sum +=
          cell->summary.runtime_at_threshold / base->summary.runtime_at_threshold;
      rounds_sum += static_cast<double>(cell->summary.threshold_round);
      ++counted;
    }
    if (counted > 0) {
      row.worker_time_ratio = wt_ratio_sum / counted;
      row.runtime_ratio = rt_ratio_sum / counted;
      row.mean_rounds_to_threshold = rounds_sum / counted;
    } else {
      row.flagged = true;
    }
    table.any_flagged = table.any_flagged || row.flagged;
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::string render_summary(const SummaryTable& table) {
  std::ostringstream out;
  out << "config                         policy          n    worker_time_ratio  "
         "runtime_ratio  rounds_to_threshold\n";
  for (const auto& row : table.rows) {
    char line[256];
    std::snprintf(line, sizeof(line), "%-30s %-15s %-4d %-18.4g %-14.4g %-12.1f %s\n",
                  row.config_name.c_str(), row.policy.c_str(), row.n,
                  row.worker_time_ratio, row.runtime_ratio,
                  row.mean_rounds_to_threshold,
                  row.flagged ? ("FLAGGED: " + row.note).c_str() : "");
    out << line;
  }
  return out.str();
}

void write_summary_files(const SummaryTable& table, const std::string& out_dir) {
  fs::create_directories(out_dir);
  std::string csv =
      "config,policy,n,worker_time_ratio,runtime_ratio,rounds_to_threshold,flagged\n";
  for (const auto& row : table.rows) {
    csv += row.config_name + "," + row.policy + "," + std::to_string(row.n) + "," +
           format_value(row.worker_time_ratio) + "," + format_value(row.runtime_ratio) +
           "," + format_value(row.mean_rounds_to_threshold) + "," +
           (row.flagged ? "1" : "0") + "\n";
  }
  write_text_file(out_dir + "/summary.csv", csv);
  write_text_file(out_dir + "/summary.txt", render_summary(table));
}

}  // namespace ata
