#pragma once

#include <vector>

#include "ata/rng.hpp"

namespace ata {

// Convex quadratic test problem 0.5 x'Ax - b'x with A the tridiagonal
// Toeplitz matrix (1/4) tridiag(-1, 2, -1) and b = (1/4)(-1, 0, ..., 0).
// A is positive definite for every dimension, so the minimum is unique and
// obtained from one tridiagonal solve at construction.
struct QuadraticProblem {
  int dimension = 0;
  double f_star = 0.0;
  std::vector<double> x_star;

  explicit QuadraticProblem(int dimension);

  double lambda_max() const;  // closed form for the Toeplitz spectrum
  double lambda_min() const;
};

struct GradientOracle {
  double sigma = 0.01;  // E ||g - grad f||^2 == sigma^2
};

double objective(const QuadraticProblem& problem, const std::vector<double>& x);

// Exact gradient A x - b via the O(d) tridiagonal product.
std::vector<double> grad(const QuadraticProblem& problem, const std::vector<double>& x);

// Exact gradient plus isotropic Gaussian noise with per-coordinate variance
// sigma^2 / d, making the expected squared deviation exactly sigma^2.
std::vector<double> noisy_grad(const QuadraticProblem& problem, const GradientOracle& oracle,
                               const std::vector<double>& x, Rng& rng);

// Mean of `batch` independent noisy gradients, drawn in aggregate: the
// average of B isotropic Gaussian perturbations is itself Gaussian with
// variance sigma^2 / (d * B) per coordinate, so one draw suffices.
void minibatch_grad_mean(const QuadraticProblem& problem, const GradientOracle& oracle,
                         int batch, const std::vector<double>& x, Rng& rng,
                         std::vector<double>& out);

// x - step_size * (mean of the supplied gradients)
std::vector<double> sgd_step(const std::vector<double>& x,
                             const std::vector<std::vector<double>>& gradients,
                             double step_size);

// f(x) - f_star, with tiny negative rounding residue clamped to zero.
double suboptimality(const QuadraticProblem& problem, const std::vector<double>& x);

}  // namespace ata
