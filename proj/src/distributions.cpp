#include "ata/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ata {

namespace {

void require(bool ok, const char* message) {
  if (!ok) throw std::invalid_argument(message);
}

// Centered psi_1 bound. Closed forms where the family has a clean one,
// otherwise the conservative 2 * mean used by the exponential-type fleets.
double bounded_range_orlicz(double half_width) { return half_width / std::log(2.0); }

}  // namespace

ArmModel ArmModel::deterministic(double value) {
  require(value > 0.0, "deterministic arm: value must be positive");
  ArmModel arm;
  arm.kind = DistKind::Deterministic;
  arm.mean = value;
  arm.orlicz_bound = 0.0;
  return arm;
}

ArmModel ArmModel::shifted_exp(double shift, double scale) {
  require(shift >= 0.0, "shifted_exp arm: shift must be nonnegative");
  require(scale > 0.0, "shifted_exp arm: scale must be positive");
  ArmModel arm;
  arm.kind = DistKind::ShiftedExp;
  arm.shift = shift;
  arm.p1 = scale;
  arm.mean = shift + scale;
  arm.orlicz_bound = 2.0 * arm.mean;
  return arm;
}

ArmModel ArmModel::uniform(double lo, double hi, double shift) {
  require(shift >= 0.0, "uniform arm: shift must be nonnegative");
  require(lo >= 0.0 && hi > lo, "uniform arm: requires 0 <= lo < hi");
  ArmModel arm;
  arm.kind = DistKind::Uniform;
  arm.shift = shift;
  arm.p1 = lo;
  arm.p2 = hi;
  arm.mean = shift + 0.5 * (lo + hi);
  arm.orlicz_bound = bounded_range_orlicz(0.5 * (hi - lo));
  return arm;
}

ArmModel ArmModel::half_normal(double sigma, double shift) {
  require(shift >= 0.0, "half_normal arm: shift must be nonnegative");
  require(sigma > 0.0, "half_normal arm: sigma must be positive");
  ArmModel arm;
  arm.kind = DistKind::HalfNormal;
  arm.shift = shift;
  arm.p1 = sigma;
  arm.mean = shift + sigma * std::sqrt(2.0 / M_PI);
  arm.orlicz_bound = 2.0 * arm.mean;
  return arm;
}

ArmModel ArmModel::lognormal(double log_mean, double log_sigma, double shift) {
  require(shift >= 0.0, "lognormal arm: shift must be nonnegative");
  require(log_sigma > 0.0, "lognormal arm: log_sigma must be positive");
  ArmModel arm;
  arm.kind = DistKind::Lognormal;
  arm.shift = shift;
  arm.p1 = log_mean;
  arm.p2 = log_sigma;
  arm.mean = shift + std::exp(log_mean + 0.5 * log_sigma * log_sigma);
  arm.orlicz_bound = 2.0 * arm.mean;
  return arm;
}

ArmModel ArmModel::gamma(double shape, double scale, double shift) {
  require(shift >= 0.0, "gamma arm: shift must be nonnegative");
  require(shape > 0.0 && scale > 0.0, "gamma arm: shape and scale must be positive");
  ArmModel arm;
  arm.kind = DistKind::Gamma;
  arm.shift = shift;
  arm.p1 = shape;
  arm.p2 = scale;
  arm.mean = shift + shape * scale;
  arm.orlicz_bound = 2.0 * arm.mean;
  return arm;
}

std::string ArmModel::label() const {
  switch (kind) {
    case DistKind::Deterministic: return "deterministic(" + std::to_string(mean) + ")";
    case DistKind::ShiftedExp:
      return std::to_string(shift) + "+exp(" + std::to_string(p1) + ")";
    case DistKind::Uniform:
      return std::to_string(shift) + "+uniform(" + std::to_string(p1) + "," +
             std::to_string(p2) + ")";
    case DistKind::HalfNormal:
      return std::to_string(shift) + "+halfnormal(" + std::to_string(p1) + ")";
    case DistKind::Lognormal:
      return std::to_string(shift) + "+lognormal(" + std::to_string(p1) + "," +
             std::to_string(p2) + ")";
    case DistKind::Gamma:
      return std::to_string(shift) + "+gamma(" + std::to_string(p1) + "," +
             std::to_string(p2) + ")";
  }
  return "unknown";
}

double sample(const ArmModel& arm, Rng& rng) {
  switch (arm.kind) {
    case DistKind::Deterministic:
      return arm.mean;
    case DistKind::ShiftedExp:
      return arm.shift + rng.exponential(arm.p1);
    case DistKind::Uniform:
      return arm.shift + arm.p1 + (arm.p2 - arm.p1) * rng.uniform01();
    case DistKind::HalfNormal:
      return arm.shift + arm.p1 * std::abs(rng.normal());
    case DistKind::Lognormal:
      return arm.shift + std::exp(arm.p1 + arm.p2 * rng.normal());
    case DistKind::Gamma:
      return arm.shift + rng.gamma(arm.p1, arm.p2);
  }
  throw std::logic_error("sample: unhandled distribution kind");
}

std::vector<double> FleetSpec::means() const {
  std::vector<double> out(arms.size());
  for (std::size_t i = 0; i < arms.size(); ++i) out[i] = arms[i].mean;
  return out;
}

FleetSpec make_fleet(std::vector<ArmModel> arms) {
  if (arms.empty()) throw std::invalid_argument("fleet: needs at least one arm");
  FleetSpec fleet;
  fleet.arms = std::move(arms);
  for (const auto& arm : fleet.arms) {
    fleet.eta = std::max(fleet.eta, arm.orlicz_bound / arm.mean);
  }
  return fleet;
}

FleetSpec make_fleet(Family family, int n) {
  if (n < 1) throw std::invalid_argument("fleet: n must be at least 1");
  std::vector<ArmModel> arms;
  arms.reserve(static_cast<std::size_t>(n));
  switch (family) {
    case Family::SqrtExp:
      for (int i = 1; i <= n; ++i) {
        const double base = 29.0 * std::sqrt(static_cast<double>(i));
        arms.push_back(ArmModel::shifted_exp(base, base));
      }
      break;
    case Family::LinearExp:
      for (int i = 1; i <= n; ++i) {
        const double base = 29.0 * i;
        arms.push_back(ArmModel::shifted_exp(base, base));
      }
      break;
    case Family::ExpOnly:
      for (int i = 1; i <= n; ++i) {
        arms.push_back(ArmModel::shifted_exp(0.0, 2.0 * i));
      }
      break;
    case Family::HeterogeneousGroups: {
      if (n % 5 != 0) {
        throw std::invalid_argument(
            "fleet: heterogeneous_groups requires n divisible by 5");
      }
      // Five distribution families per group, all with mean 2m where
      // m = 29 * (5g + 1); the additive constant m applies to every member.
      for (int g = 0; g < n / 5; ++g) {
        const double m = 29.0 * (5.0 * g + 1.0);
        arms.push_back(ArmModel::shifted_exp(m, m));
        arms.push_back(ArmModel::uniform(0.5 * m, 1.5 * m, m));
        arms.push_back(ArmModel::half_normal(m * std::sqrt(M_PI / 2.0), m));
        // exp(log(m)/2 + log(m)/2) = m, so the lognormal member's mean is
        // exactly m + m like the rest of its group.
        arms.push_back(ArmModel::lognormal(0.5 * std::log(m), std::sqrt(std::log(m)), m));
        arms.push_back(ArmModel::gamma(m * m, 1.0 / m, m));
      }
      break;
    }
    case Family::Custom:
      throw std::invalid_argument("fleet: custom family requires explicit arms");
  }
  return make_fleet(std::move(arms));
}

std::string family_name(Family family) {
  switch (family) {
    case Family::SqrtExp: return "sqrt_exp";
    case Family::LinearExp: return "linear_exp";
    case Family::HeterogeneousGroups: return "heterogeneous_groups";
    case Family::ExpOnly: return "exp_only";
    case Family::Custom: return "custom";
  }
  return "unknown";
}

}  // namespace ata
