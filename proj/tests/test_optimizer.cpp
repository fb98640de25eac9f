#include <doctest.h>

#include <stdexcept>
#include <cmath>

#include "ata/optimizer.hpp"
#include "ata/rng.hpp"

using namespace ata;

namespace {

std::vector<double> random_point(Rng& rng, int d) {
  std::vector<double> x(d);
  for (double& v : x) v = rng.normal();
  return x;
}

}  // namespace

TEST_CASE("gradient vanishes at the solve's minimizer") {
  const QuadraticProblem problem(100);
  const std::vector<double> g = grad(problem, problem.x_star);
  for (double gi : g) CHECK(std::abs(gi) < 1e-12);
}

TEST_CASE("gradient at the origin is the negated linear term") {
  const QuadraticProblem problem(50);
  const std::vector<double> g = grad(problem, std::vector<double>(50, 0.0));
  CHECK(g[0] == 0.25);
  for (int i = 1; i < 50; ++i) CHECK(g[i] == 0.0);
}

TEST_CASE("objective at the minimizer matches the precomputed minimum") {
  for (const int d : {1, 2, 10, 100, 1000}) {
    const QuadraticProblem problem(d);
    const double direct = objective(problem, problem.x_star);
    CHECK(direct == doctest::Approx(problem.f_star).epsilon(1e-12));
  }
}

TEST_CASE("central differences agree with the analytic gradient") {
  const QuadraticProblem problem(60);
  Rng rng = make_stream(3, stream_domain::kTest, 70);
  const double h = 1e-5;
  for (int probe = 0; probe < 100; ++probe) {
    const std::vector<double> x = random_point(rng, 60);
    std::vector<double> direction = random_point(rng, 60);
    double norm = 0.0;
    for (double v : direction) norm += v * v;
    norm = std::sqrt(norm);
    for (double& v : direction) v /= norm;

    std::vector<double> plus(x);
    std::vector<double> minus(x);
    for (int i = 0; i < 60; ++i) {
      plus[i] += h * direction[i];
      minus[i] -= h * direction[i];
    }
    const double fd = (objective(problem, plus) - objective(problem, minus)) / (2.0 * h);
    const std::vector<double> g = grad(problem, x);
    double directional = 0.0;
    for (int i = 0; i < 60; ++i) directional += g[i] * direction[i];
    CHECK(std::abs(fd - directional) <=
          1e-6 * std::max(1.0, std::abs(directional)));
  }
}

TEST_CASE("noiseless oracle returns the exact gradient") {
  const QuadraticProblem problem(30);
  Rng rng(4);
  const std::vector<double> x = random_point(rng, 30);
  const std::vector<double> g = grad(problem, x);
  GradientOracle oracle;
  oracle.sigma = 0.0;
  CHECK(noisy_grad(problem, oracle, x, rng) == g);
}

TEST_CASE("noisy gradients are unbiased with the advertised deviation") {
  const QuadraticProblem problem(10);
  GradientOracle oracle;  // sigma 0.01
  Rng rng = make_stream(5, stream_domain::kTest, 71);
  const std::vector<double> x = random_point(rng, 10);
  const std::vector<double> g = grad(problem, x);

  const int draws = 100000;
  std::vector<double> sum(10, 0.0);
  double sq_sum = 0.0;
  for (int t = 0; t < draws; ++t) {
    const std::vector<double> noisy = noisy_grad(problem, oracle, x, rng);
    double sq = 0.0;
    for (int i = 0; i < 10; ++i) {
      sum[i] += noisy[i];
      const double diff = noisy[i] - g[i];
      sq += diff * diff;
    }
    sq_sum += sq;
  }

  const double coord_se = oracle.sigma / std::sqrt(10.0) / std::sqrt(draws);
  for (int i = 0; i < 10; ++i) {
    CHECK(std::abs(sum[i] / draws - g[i]) <= 4.0 * coord_se);
  }
  const double sigma_sq = oracle.sigma * oracle.sigma;
  const double se = sigma_sq * std::sqrt(2.0 / 10.0) / std::sqrt(draws);
  CHECK(std::abs(sq_sum / draws - sigma_sq) <= 3.0 * se);
}

TEST_CASE("aggregate minibatch mean matches the batched law") {
  const QuadraticProblem problem(8);
  GradientOracle oracle;
  oracle.sigma = 0.5;
  Rng rng = make_stream(6, stream_domain::kTest, 72);
  const std::vector<double> x = random_point(rng, 8);
  const std::vector<double> g = grad(problem, x);

  const int batch = 16;
  const int draws = 200000;
  double sq_sum = 0.0;
  std::vector<double> mean_grad;
  for (int t = 0; t < draws; ++t) {
    minibatch_grad_mean(problem, oracle, batch, x, rng, mean_grad);
    double sq = 0.0;
    for (int i = 0; i < 8; ++i) {
      const double diff = mean_grad[i] - g[i];
      sq += diff * diff;
    }
    sq_sum += sq;
  }
  const double expected = oracle.sigma * oracle.sigma / batch;
  CHECK(sq_sum / draws == doctest::Approx(expected).epsilon(0.02));
}

TEST_CASE("sgd step averages the supplied gradients") {
  const std::vector<double> x = {1.0, 2.0};

  SUBCASE("zero gradients leave the point in place") {
    CHECK(sgd_step(x, {{0.0, 0.0}, {0.0, 0.0}}, 0.7) == x);
  }
  SUBCASE("single gradient with unit step") {
    CHECK(sgd_step(x, {{0.5, -1.0}}, 1.0) == std::vector<double>{0.5, 3.0});
  }
  SUBCASE("dimension mismatch is rejected") {
    CHECK_THROWS_AS(sgd_step(x, {{1.0}}, 1.0), std::invalid_argument);
  }
}

TEST_CASE("deterministic descent with the default step is monotone") {
  const QuadraticProblem problem(100);
  const double step = 1.0 / problem.lambda_max();
  std::vector<double> x(100, 0.0);
  double previous = objective(problem, x);
  for (int iter = 0; iter < 200; ++iter) {
    const std::vector<double> g = grad(problem, x);
    x = sgd_step(x, {g}, step);
    const double value = objective(problem, x);
    CHECK(value <= previous + 1e-15);
    previous = value;
  }
}

TEST_CASE("suboptimality is the clamped objective gap") {
  const QuadraticProblem problem(100);
  CHECK(suboptimality(problem, problem.x_star) == 0.0);
  // f(0) = 0, so the gap at the origin is -f_star
  const double at_origin = suboptimality(problem, std::vector<double>(100, 0.0));
  CHECK(at_origin == doctest::Approx(-problem.f_star).epsilon(1e-12));
  CHECK(at_origin > 0.0);
}

TEST_CASE("spectrum closed forms bracket the matrix action") {
  const QuadraticProblem problem(40);
  CHECK(problem.lambda_max() < 1.0);
  CHECK(problem.lambda_min() > 0.0);
  // Rayleigh quotients never exceed the extreme eigenvalues.
  Rng rng = make_stream(8, stream_domain::kTest, 73);
  for (int t = 0; t < 50; ++t) {
    const std::vector<double> x = random_point(rng, 40);
    std::vector<double> zero(40, 0.0);
    const std::vector<double> ax = grad(problem, x);  // A x - b
    const std::vector<double> b_term = grad(problem, zero);
    double xx = 0.0;
    double xax = 0.0;
    for (int i = 0; i < 40; ++i) {
      xx += x[i] * x[i];
      xax += x[i] * (ax[i] - b_term[i]);
    }
    const double rayleigh = xax / xx;
    CHECK(rayleigh <= problem.lambda_max() + 1e-12);
    CHECK(rayleigh >= problem.lambda_min() - 1e-12);
  }
}
