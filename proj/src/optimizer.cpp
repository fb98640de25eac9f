#include "ata/optimizer.hpp"

#include <cmath>
#include <stdexcept>

namespace ata {

namespace {

constexpr double kDiag = 0.5;       // 2/4
constexpr double kOffDiag = -0.25;  // -1/4

void require(bool ok, const char* message) {
  if (!ok) throw std::invalid_argument(message);
}

// A x for the fixed tridiagonal A.
void apply_matrix(const std::vector<double>& x, std::vector<double>& out) {
  const int d = static_cast<int>(x.size());
  for (int i = 0; i < d; ++i) {
    double v = kDiag * x[i];
    if (i > 0) v += kOffDiag * x[i - 1];
    if (i + 1 < d) v += kOffDiag * x[i + 1];
    out[i] = v;
  }
}

std::vector<double> rhs_vector(int d) {
  std::vector<double> b(d, 0.0);
  b[0] = -0.25;
  return b;
}

// Thomas algorithm for the constant tridiagonal system A x = b.
std::vector<double> tridiag_solve(int d, const std::vector<double>& b) {
  std::vector<double> c_prime(d, 0.0);
  std::vector<double> d_prime(d, 0.0);
  c_prime[0] = kOffDiag / kDiag;
  d_prime[0] = b[0] / kDiag;
  for (int i = 1; i < d; ++i) {
    const double denom = kDiag - kOffDiag * c_prime[i - 1];
    c_prime[i] = kOffDiag / denom;
    d_prime[i] = (b[i] - kOffDiag * d_prime[i - 1]) / denom;
  }
  std::vector<double> x(d, 0.0);
  x[d - 1] = d_prime[d - 1];
  for (int i = d - 2; i >= 0; --i) {
    x[i] = d_prime[i] - c_prime[i] * x[i + 1];
  }
  return x;
}

}  // namespace

QuadraticProblem::QuadraticProblem(int dim) : dimension(dim) {
  require(dim >= 1, "quadratic problem: dimension must be at least 1");
  const std::vector<double> b = rhs_vector(dim);
  x_star = tridiag_solve(dim, b);
  // f(x*) = -0.5 b' x* at the stationary point.
  double bx = 0.0;
  for (int i = 0; i < dim; ++i) bx += b[i] * x_star[i];
  f_star = -0.5 * bx;
}

double QuadraticProblem::lambda_max() const {
  const double angle = static_cast<double>(dimension) * M_PI /
                       (2.0 * (static_cast<double>(dimension) + 1.0));
  const double s = std::sin(angle);
  return s * s;
}

double QuadraticProblem::lambda_min() const {
  const double angle = M_PI / (2.0 * (static_cast<double>(dimension) + 1.0));
  const double s = std::sin(angle);
  return s * s;
}

double objective(const QuadraticProblem& problem, const std::vector<double>& x) {
  require(static_cast<int>(x.size()) == problem.dimension,
          "objective: dimension mismatch");
  std::vector<double> ax(x.size());
  apply_matrix(x, ax);
  double quad = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) quad += x[i] * ax[i];
  return 0.5 * quad + 0.25 * x[0];  // -b'x with b_0 = -1/4
}

std::vector<double> grad(const QuadraticProblem& problem, const std::vector<double>& x) {
  require(static_cast<int>(x.size()) == problem.dimension, "grad: dimension mismatch");
  std::vector<double> g(x.size());
  apply_matrix(x, g);
  g[0] += 0.25;  // minus b
  return g;
}

std::vector<double> noisy_grad(const QuadraticProblem& problem, const GradientOracle& oracle,
                               const std::vector<double>& x, Rng& rng) {
  std::vector<double> g = grad(problem, x);
  if (oracle.sigma > 0.0) {
    const double sd = oracle.sigma / std::sqrt(static_cast<double>(problem.dimension));
    for (double& gi : g) gi += sd * rng.normal();
  }
  return g;
}

void minibatch_grad_mean(const QuadraticProblem& problem, const GradientOracle& oracle,
                         int batch, const std::vector<double>& x, Rng& rng,
                         std::vector<double>& out) {
  require(batch >= 1, "minibatch_grad_mean: batch must be at least 1");
  require(static_cast<int>(x.size()) == problem.dimension,
          "minibatch_grad_mean: dimension mismatch");
  out.resize(x.size());
  apply_matrix(x, out);
  out[0] += 0.25;
  if (oracle.sigma > 0.0) {
    const double sd = oracle.sigma /
                      std::sqrt(static_cast<double>(problem.dimension) * batch);
    for (double& gi : out) gi += sd * rng.normal();
  }
}

std::vector<double> sgd_step(const std::vector<double>& x,
                             const std::vector<std::vector<double>>& gradients,
                             double step_size) {
  require(!gradients.empty(), "sgd_step: needs at least one gradient");
  const std::size_t d = x.size();
  std::vector<double> next(x);
  const double scale = step_size / static_cast<double>(gradients.size());
  for (const auto& g : gradients) {
    require(g.size() == d, "sgd_step: gradient dimension mismatch");
    for (std::size_t i = 0; i < d; ++i) next[i] -= scale * g[i];
  }
  return next;
}

double suboptimality(const QuadraticProblem& problem, const std::vector<double>& x) {
  return std::max(0.0, objective(problem, x) - problem.f_star);
}

}  // namespace ata
