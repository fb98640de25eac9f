#include <doctest.h>

#include <stdexcept>
#include "ata/config.hpp"

using namespace ata;

TEST_CASE("minimal config gets defaults") {
  const ExperimentConfig cfg = parse_config(
      R"({"n": 17, "B": 23, "policy": {"kind": "ofta"}, "family": {"kind": "sqrt_exp"}})",
      "minimal");
  CHECK(cfg.name == "minimal");
  CHECK(cfg.n == 17);
  CHECK(cfg.budget == 23);
  CHECK(cfg.policy.kind == Policy::Kind::OFTA);
  CHECK(cfg.family == Family::SqrtExp);
  CHECK(cfg.seeds == std::vector<std::uint64_t>{1, 2, 3, 4, 5});
  CHECK_FALSE(cfg.optimizer.enabled);
  CHECK(cfg.optimizer.dimension == 100);
  CHECK(cfg.optimizer.sigma == 0.01);
  CHECK(cfg.warm_start_rounds == 0);
  CHECK(cfg.stop.max_rounds == 1000);
  CHECK_FALSE(cfg.stop.suboptimality_threshold.has_value());
}

TEST_CASE("full config round trip") {
  const ExperimentConfig cfg = parse_config(R"({
    "name": "demo",
    "n": 20, "B": 5,
    "policy": {"kind": "ata", "alpha": 4.0},
    "family": {"kind": "exp_only"},
    "seeds": [7, 8],
    "optimizer": {"enabled": true, "d": 40, "gamma": 0.5, "sigma": 0.02},
    "warm_start_P": 100,
    "stop": {"max_rounds": 5000, "threshold": 1e-4}
  })",
                                            "ignored");
  CHECK(cfg.name == "demo");
  CHECK(cfg.policy.kind == Policy::Kind::ATA);
  CHECK(cfg.policy.alpha == 4.0);
  CHECK(cfg.seeds == std::vector<std::uint64_t>{7, 8});
  CHECK(cfg.optimizer.enabled);
  CHECK(cfg.optimizer.dimension == 40);
  CHECK(cfg.optimizer.step_size == 0.5);
  CHECK(cfg.optimizer.sigma == 0.02);
  CHECK(cfg.warm_start_rounds == 100);
  CHECK(cfg.stop.max_rounds == 5000);
  CHECK(cfg.stop.suboptimality_threshold == 1e-4);
}

TEST_CASE("custom family builds explicit arms") {
  const ExperimentConfig cfg = parse_config(R"({
    "n": 2, "B": 3,
    "policy": {"kind": "ofta"},
    "family": {"kind": "custom", "arms": [
      {"kind": "deterministic", "value": 1.0},
      {"kind": "shifted_exp", "shift": 2.0, "scale": 3.0}
    ]}
  })",
                                            "custom");
  const FleetSpec fleet = cfg.build_fleet();
  CHECK(fleet.size() == 2);
  CHECK(fleet.arms[0].mean == 1.0);
  CHECK(fleet.arms[1].mean == 5.0);
}

TEST_CASE("invalid configs fail with field-level messages") {
  auto fails_with = [](const std::string& text, const std::string& needle) {
    try {
      parse_config(text, "bad");
      FAIL_CHECK("expected a config error for: " << text);
    } catch (const ConfigError& e) {
      INFO(e.what());
      CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
  };

  fails_with(R"({"n": 5, "B": 0, "policy": {"kind": "ofta"}, "family": {"kind": "sqrt_exp"}})",
             "B");
  fails_with(R"({"n": 5, "B": 3, "policy": {"kind": "ata"}, "family": {"kind": "sqrt_exp"}})",
             "alpha");
  fails_with(R"({"n": 5, "B": 3, "policy": {"kind": "ata_empirical"}, "family": {"kind": "sqrt_exp"}})",
             "eta");
  fails_with(R"({"n": 5, "B": 3, "policy": {"kind": "ofta"}, "family": {"kind": "sqrt_exp"}, "extra": 1})",
             "extra");
  fails_with(R"({"n": 5, "B": 3, "policy": {"kind": "ofta", "alpha": 2}, "family": {"kind": "sqrt_exp"}})",
             "alpha");
  fails_with(R"({"n": 7, "B": 3, "policy": {"kind": "ofta"}, "family": {"kind": "heterogeneous_groups"}})",
             "divisible by 5");
  fails_with(R"({"n": 5, "B": 3, "policy": {"kind": "ofta"}, "family": {"kind": "nope"}})",
             "family.kind");
  fails_with(R"({"n": 5, "B": 3, "policy": {"kind": "ofta"}, "family": {"kind": "sqrt_exp"}, "stop": {"threshold": 1e-5}})",
             "threshold");
  fails_with(R"({"n": 5, "B": 3, "policy": {"kind": "ofta"}, "family": {"kind": "sqrt_exp"}, "warm_start_P": 10})",
             "warm_start_P");
  fails_with(R"({"n": 2, "B": 3, "policy": {"kind": "ofta"}, "family": {"kind": "custom", "arms": [{"kind": "deterministic", "value": 1.0}]}})",
             "arm count");
  fails_with("{", "parse error");
}
