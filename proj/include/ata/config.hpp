#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "ata/simulator.hpp"

namespace ata {

// One experiment cell family: everything run_experiment needs plus the seed
// sweep and a name used for output files.
struct ExperimentConfig {
  std::string name = "experiment";
  int n = 0;
  int budget = 0;
  Policy policy;
  Family family = Family::Custom;
  std::vector<ArmModel> custom_arms;  // only for Family::Custom
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
  OptimizerSettings optimizer;
  std::int64_t warm_start_rounds = 0;
  StopRule stop;

  FleetSpec build_fleet() const;
  ExperimentSpec build_spec() const;
};

// Parse and validate a config from JSON text. Unknown keys anywhere in the
// document are rejected; validation failures name the offending field.
ExperimentConfig parse_config(const std::string& json_text, const std::string& name_hint);

// Same, reading from a file; the default name is the file stem.
ExperimentConfig load_config(const std::string& path);

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ata
