#pragma once

#include <string>
#include <vector>

#include "ata/rng.hpp"

namespace ata {

enum class DistKind {
  Deterministic,
  ShiftedExp,  // shift + Exp(scale); shift may be zero
  Uniform,     // shift + U[lo, hi]
  HalfNormal,  // shift + |N(0, sigma^2)|
  Lognormal,   // shift + exp(N(log_mean, log_sigma^2))
  Gamma,       // shift + Gamma(shape, scale)
};

// One worker's computation-time distribution, with its analytic mean and a
// bound on the sub-exponential (psi_1) norm of the centered variable. Samples
// are almost surely nonnegative. Construct through the factory functions;
// they validate parameters once so sampling never has to.
struct ArmModel {
  DistKind kind = DistKind::Deterministic;
  double shift = 0.0;
  double p1 = 0.0;  // scale / lo / sigma / log mean / shape
  double p2 = 0.0;  // hi / log sigma / scale
  double mean = 0.0;
  double orlicz_bound = 0.0;

  static ArmModel deterministic(double value);
  static ArmModel shifted_exp(double shift, double scale);
  static ArmModel uniform(double lo, double hi, double shift = 0.0);
  static ArmModel half_normal(double sigma, double shift = 0.0);
  static ArmModel lognormal(double log_mean, double log_sigma, double shift = 0.0);
  static ArmModel gamma(double shape, double scale, double shift = 0.0);

  std::string label() const;
};

// One independent draw. Identical stream state gives an identical draw.
double sample(const ArmModel& arm, Rng& rng);

enum class Family {
  SqrtExp,              // nu_i = 29*sqrt(i) + Exp(29*sqrt(i))
  LinearExp,            // nu_i = 29*i + Exp(29*i)
  HeterogeneousGroups,  // groups of five distribution families, equal means
  ExpOnly,              // nu_i = Exp(2*i)
  Custom,
};

struct FleetSpec {
  std::vector<ArmModel> arms;
  double eta = 0.0;  // max over arms of orlicz_bound / mean

  int size() const { return static_cast<int>(arms.size()); }
  std::vector<double> means() const;
};

FleetSpec make_fleet(Family family, int n);
FleetSpec make_fleet(std::vector<ArmModel> arms);

std::string family_name(Family family);

}  // namespace ata
