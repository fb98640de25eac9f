#include "ata/config.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace ata {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& message) {
  throw ConfigError("config: " + field + ": " + message);
}

void reject_unknown_keys(const json& node, const std::string& where,
                         const std::set<std::string>& allowed) {
  for (const auto& item : node.items()) {
    if (!allowed.count(item.key())) {
      fail(where.empty() ? item.key() : where + "." + item.key(), "unknown key");
    }
  }
}

double number_field(const json& node, const std::string& where, const char* key) {
  if (!node.contains(key)) fail(where + "." + key, "missing");
  if (!node[key].is_number()) fail(where + "." + key, "expected a number");
  return node[key].get<double>();
}

Policy parse_policy(const json& node) {
  if (!node.is_object()) fail("policy", "expected an object");
  reject_unknown_keys(node, "policy", {"kind", "alpha", "eta"});
  if (!node.contains("kind") || !node["kind"].is_string()) {
    fail("policy.kind", "missing or not a string");
  }
  const std::string kind = node["kind"].get<std::string>();
  if (kind == "ata") {
    if (!node.contains("alpha")) fail("policy.alpha", "required for ata");
    const double alpha = number_field(node, "policy", "alpha");
    if (alpha <= 0.0) fail("policy.alpha", "must be positive");
    return Policy::ata(alpha);
  }
  if (kind == "ata_empirical") {
    if (!node.contains("eta")) fail("policy.eta", "required for ata_empirical");
    const double eta = number_field(node, "policy", "eta");
    if (eta <= 0.0) fail("policy.eta", "must be positive");
    return Policy::ata_empirical(eta);
  }
  if (node.contains("alpha")) fail("policy.alpha", "only valid for ata");
  if (node.contains("eta")) fail("policy.eta", "only valid for ata_empirical");
  if (kind == "ofta") return Policy::ofta();
  if (kind == "uta") return Policy::uta();
  if (kind == "gta") return Policy::gta();
  fail("policy.kind", "unknown policy '" + kind + "'");
}

ArmModel parse_arm(const json& node, const std::string& where) {
  if (!node.is_object()) fail(where, "expected an object");
  if (!node.contains("kind") || !node["kind"].is_string()) {
    fail(where + ".kind", "missing or not a string");
  }
  const std::string kind = node["kind"].get<std::string>();
  const double shift = node.contains("shift") ? number_field(node, where, "shift") : 0.0;
  try {
    if (kind == "deterministic") {
      reject_unknown_keys(node, where, {"kind", "value"});
      return ArmModel::deterministic(number_field(node, where, "value"));
    }
    if (kind == "shifted_exp") {
      reject_unknown_keys(node, where, {"kind", "shift", "scale"});
      return ArmModel::shifted_exp(shift, number_field(node, where, "scale"));
    }
    if (kind == "uniform") {
      reject_unknown_keys(node, where, {"kind", "shift", "lo", "hi"});
      return ArmModel::uniform(number_field(node, where, "lo"),
                               number_field(node, where, "hi"), shift);
    }
    if (kind == "half_normal") {
      reject_unknown_keys(node, where, {"kind", "shift", "sigma"});
      return ArmModel::half_normal(number_field(node, where, "sigma"), shift);
    }
    if (kind == "lognormal") {
      reject_unknown_keys(node, where, {"kind", "shift", "log_mean", "log_sigma"});
      return ArmModel::lognormal(number_field(node, where, "log_mean"),
                                 number_field(node, where, "log_sigma"), shift);
    }
    if (kind == "gamma") {
      reject_unknown_keys(node, where, {"kind", "shift", "shape", "scale"});
      return ArmModel::gamma(number_field(node, where, "shape"),
                             number_field(node, where, "scale"), shift);
    }
  } catch (const std::invalid_argument& e) {
    fail(where, e.what());
  }
  fail(where + ".kind", "unknown distribution '" + kind + "'");
}

}  // namespace

FleetSpec ExperimentConfig::build_fleet() const {
  if (family == Family::Custom) return make_fleet(custom_arms);
  return make_fleet(family, n);
}

ExperimentSpec ExperimentConfig::build_spec() const {
  ExperimentSpec spec;
  spec.fleet = build_fleet();
  spec.policy = policy;
  spec.budget = budget;
  spec.stop = stop;
  spec.optimizer = optimizer;
  spec.warm_start_rounds = warm_start_rounds;
  return spec;
}

ExperimentConfig parse_config(const std::string& json_text, const std::string& name_hint) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: parse error: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config: top level must be an object");
  reject_unknown_keys(root, "", {"name", "n", "B", "policy", "family", "seeds",
                                 "optimizer", "warm_start_P", "stop"});

  ExperimentConfig cfg;
  cfg.name = name_hint;
  if (root.contains("name")) {
    if (!root["name"].is_string()) fail("name", "expected a string");
    cfg.name = root["name"].get<std::string>();
  }

  if (!root.contains("n") || !root["n"].is_number_integer()) {
    fail("n", "required positive integer");
  }
  cfg.n = root["n"].get<int>();
  if (cfg.n < 1) fail("n", "must be at least 1");

  if (!root.contains("B") || !root["B"].is_number_integer()) {
    fail("B", "required positive integer");
  }
  cfg.budget = root["B"].get<int>();
  if (cfg.budget < 1) fail("B", "must be at least 1");

  if (!root.contains("policy")) fail("policy", "missing");
  cfg.policy = parse_policy(root["policy"]);

  if (!root.contains("family")) fail("family", "missing");
  {
    const json& fam = root["family"];
    if (!fam.is_object()) fail("family", "expected an object");
    reject_unknown_keys(fam, "family", {"kind", "arms"});
    if (!fam.contains("kind") || !fam["kind"].is_string()) {
      fail("family.kind", "missing or not a string");
    }
    const std::string kind = fam["kind"].get<std::string>();
    if (kind == "sqrt_exp") cfg.family = Family::SqrtExp;
    else if (kind == "linear_exp") cfg.family = Family::LinearExp;
    else if (kind == "exp_only") cfg.family = Family::ExpOnly;
    else if (kind == "heterogeneous_groups") cfg.family = Family::HeterogeneousGroups;
    else if (kind == "custom") cfg.family = Family::Custom;
    else fail("family.kind", "unknown family '" + kind + "'");

    if (cfg.family == Family::Custom) {
      if (!fam.contains("arms") || !fam["arms"].is_array() || fam["arms"].empty()) {
        fail("family.arms", "custom family needs a nonempty arm array");
      }
      int index = 0;
      for (const auto& arm : fam["arms"]) {
        cfg.custom_arms.push_back(
            parse_arm(arm, "family.arms[" + std::to_string(index) + "]"));
        ++index;
      }
      if (static_cast<int>(cfg.custom_arms.size()) != cfg.n) {
        fail("family.arms", "arm count must equal n");
      }
    } else if (fam.contains("arms")) {
      fail("family.arms", "only valid for the custom family");
    }
    if (cfg.family == Family::HeterogeneousGroups && cfg.n % 5 != 0) {
      fail("n", "heterogeneous_groups requires n divisible by 5");
    }
  }

  if (root.contains("seeds")) {
    if (!root["seeds"].is_array() || root["seeds"].empty()) {
      fail("seeds", "expected a nonempty array of integers");
    }
    cfg.seeds.clear();
    for (const auto& s : root["seeds"]) {
      if (!s.is_number_integer() || s.get<std::int64_t>() < 0) {
        fail("seeds", "expected nonnegative integers");
      }
      cfg.seeds.push_back(s.get<std::uint64_t>());
    }
  }

  if (root.contains("optimizer")) {
    const json& opt = root["optimizer"];
    if (!opt.is_object()) fail("optimizer", "expected an object");
    reject_unknown_keys(opt, "optimizer", {"enabled", "d", "gamma", "sigma"});
    if (opt.contains("enabled")) {
      if (!opt["enabled"].is_boolean()) fail("optimizer.enabled", "expected a bool");
      cfg.optimizer.enabled = opt["enabled"].get<bool>();
    }
    if (opt.contains("d")) {
      if (!opt["d"].is_number_integer()) fail("optimizer.d", "expected an integer");
      cfg.optimizer.dimension = opt["d"].get<int>();
      if (cfg.optimizer.dimension < 1) fail("optimizer.d", "must be at least 1");
    }
    if (opt.contains("gamma")) {
      if (opt["gamma"].is_string()) {
        if (opt["gamma"].get<std::string>() != "auto") {
          fail("optimizer.gamma", "expected a positive number or \"auto\"");
        }
      } else {
        const double gamma = number_field(opt, "optimizer", "gamma");
        if (gamma <= 0.0) fail("optimizer.gamma", "must be positive");
        cfg.optimizer.step_size = gamma;
      }
    }
    if (opt.contains("sigma")) {
      const double sigma = number_field(opt, "optimizer", "sigma");
      if (sigma < 0.0) fail("optimizer.sigma", "must be nonnegative");
      cfg.optimizer.sigma = sigma;
    }
  }

  if (root.contains("warm_start_P")) {
    if (!root["warm_start_P"].is_number_integer()) {
      fail("warm_start_P", "expected a nonnegative integer");
    }
    cfg.warm_start_rounds = root["warm_start_P"].get<std::int64_t>();
    if (cfg.warm_start_rounds < 0) fail("warm_start_P", "must be nonnegative");
  }

  if (root.contains("stop")) {
    const json& stop = root["stop"];
    if (!stop.is_object()) fail("stop", "expected an object");
    reject_unknown_keys(stop, "stop", {"max_rounds", "threshold"});
    if (stop.contains("max_rounds")) {
      if (!stop["max_rounds"].is_number_integer()) {
        fail("stop.max_rounds", "expected a positive integer");
      }
      cfg.stop.max_rounds = stop["max_rounds"].get<std::int64_t>();
      if (cfg.stop.max_rounds < 1) fail("stop.max_rounds", "must be at least 1");
    }
    if (stop.contains("threshold") && !stop["threshold"].is_null()) {
      const double threshold = number_field(stop, "stop", "threshold");
      if (threshold <= 0.0) fail("stop.threshold", "must be positive");
      cfg.stop.suboptimality_threshold = threshold;
    }
  }

  if (cfg.stop.suboptimality_threshold && !cfg.optimizer.enabled) {
    fail("stop.threshold", "needs the optimizer enabled");
  }
  if (cfg.warm_start_rounds > 0 && !cfg.policy.is_learning()) {
    fail("warm_start_P", "only meaningful for learning policies");
  }

  // Surface fleet construction problems (bad custom arms, group sizing) now.
  try {
    cfg.build_fleet();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: family: ") + e.what());
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), std::filesystem::path(path).stem().string());
}

}  // namespace ata
