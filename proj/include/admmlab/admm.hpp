#pragma once

// Classical two-block ADMM with fixed step length, dual-function evaluation,
// residuals, and the Lyapunov sequence.

#include <optional>
#include <string>
#include <vector>

#include "admmlab/plq.hpp"

namespace admmlab {

struct AdmmConfig {
  double t = 1.0;
  int N = 1;
  Vector lambda0;
  Vector z0;
};

struct DualValue {
  bool bounded = false;
  double value = 0.0;  // meaningful only when bounded
  Vector x_hat;
  Vector z_hat;
  Vector xi;  // b - A x_hat - B z_hat, a supergradient of D
};

class AdmmTrace {
 public:
  double t = 0.0;
  int N = 0;
  std::vector<Vector> xs;       // x^1..x^N at index k-1
  std::vector<Vector> zs;       // z^0..z^N
  std::vector<Vector> lambdas;  // lambda^0..lambda^N
  std::vector<double> primal_residuals;  // ||A x^k + B z^k - b||, index k-1
  std::vector<Vector> dual_residuals;    // A^T B (z^{k-1} - z^k), index k-1
  std::vector<std::optional<double>> dual_values;  // D(lambda^k), k = 0..N; nullopt when unbounded

  const Vector& x(int k) const;
  const Vector& z(int k) const;
  const Vector& lambda(int k) const;
};

// Runs N iterations. Throws Unbounded (index = iteration) when a subproblem has
// no minimizer, InvalidInput on dimension mismatch or t <= 0 or N < 1.
AdmmTrace admm_run(const SeparableProblem& p, const AdmmConfig& cfg);

// D(lambda) = min_{x,z} f(x) + g(z) + <lambda, Ax + Bz - b>. Unboundedness is
// reported through DualValue::bounded, not thrown.
DualValue dual_value(const SeparableProblem& p, std::span<const double> lambda);

struct Residuals {
  double primal = 0.0;
  Vector dual;
};

// 1 <= k <= N.
Residuals residuals(const SeparableProblem& p, const AdmmTrace& trace, int k);

// V^k = ||lambda^k - lambda*||^2 + t^2 ||B(z^k - z*)||^2 for k = 0..N.
std::vector<double> lyapunov_sequence(const SeparableProblem& p, const AdmmTrace& trace,
                                      const OptimalPair& opt);

// Largest distance between the vectors required by the per-iteration
// optimality conditions and the coordinate subdifferential intervals:
//   -A^T(lambda^k + t B(z^{k-1} - z^k)) in df(x^k),  -B^T lambda^k in dg(z^k).
// Oracle sides are skipped.
double optimality_inclusion_violation(const SeparableProblem& p, const AdmmTrace& trace);

// Largest |lambda^k - lambda^{k-1} - t(A x^k + B z^k - b)| over all k, entries.
double multiplier_recursion_error(const SeparableProblem& p, const AdmmTrace& trace);

// One row per k = 0..N with columns
// k,x,z,lambda,primal_residual,dual_residual_norm,dual_value,lyapunov.
// Vectors are ';'-joined; k = 0 leaves x and residuals empty.
std::string trace_to_csv(const SeparableProblem& p, const AdmmTrace& trace,
                         const std::optional<OptimalPair>& opt);

// %.17g
std::string format_number(double v);

}  // namespace admmlab
