#pragma once

// Empirical PL diagnostics on concrete instances:
//   D* - D(lambda) <= ||xi||^2 / (2 Lp),  xi = b - A x_hat - B z_hat,
// where (x_hat, z_hat) is the Lagrangian minimizer chosen by dual_value. The
// estimate is therefore tied to that subgradient selection, and only points of
// the effective dual domain are sampled.

#include <cstdint>
#include <string>
#include <vector>

#include "admmlab/admm.hpp"

namespace admmlab {

struct PlSample {
  Vector lambda;
  double gap = 0.0;         // D* - D(lambda)
  double xi_norm_sq = 0.0;  // ||xi||^2
};

struct PlEstimate {
  double Lp_hat = 0.0;
  std::vector<PlSample> samples;
  std::size_t worst_index = 0;  // sample attaining Lp_hat
};

// D* is taken as f(x*) + g(z*) from opt. Throws InvalidInput when a sample lies
// outside the dual domain or when no sample has gap > 1e-12.
PlEstimate estimate_pl_constant(const SeparableProblem& p, const OptimalPair& opt,
                                const std::vector<Vector>& lambdas);

// count points lambda* + r u, u standard Gaussian, r cycling through 0.1, 1, 10.
std::vector<Vector> sample_lambdas(const Vector& center, std::size_t count = 100, std::uint64_t seed = 0);

struct InnerProductCheck {
  double lhs = 0.0;  // <A x_hat^1 + B z^1 - b, A x^2 + B z^2 - b>
  double rhs = 0.0;  // ||A x_hat^1 + B z^1 - b||^2
  double gap_ratio = 0.0;  // (D* - D(lambda^2)) / (D* - D(lambda^1)); 0 when the denominator vanishes
  Vector lambda2;
};

// (x_hat^1, z^1) minimize the Lagrangian at lambda1 (z^1 = z1_choice when it is
// non-empty, otherwise dual_value's choice); (x^2, z^2, lambda^2) is one ADMM step
// started from (lambda1, z^1). Throws Unbounded when D(lambda1) = -inf.
InnerProductCheck lemma_inner_product_check(const SeparableProblem& p, const Vector& lambda1,
                                            const Vector& z1_choice, double t);

// Same construction with opt, reporting the gap ratio as well.
InnerProductCheck lemma_inner_product_check(const SeparableProblem& p, const OptimalPair& opt,
                                            const Vector& lambda1, double t);

// Largest one-step ratio (D* - D(lambda^2)) / (D* - D(lambda^1)) of the
// construction above over the samples with gap > 1e-12.
double observed_contraction(const SeparableProblem& p, const OptimalPair& opt, double t,
                            const std::vector<Vector>& lambdas);

struct NecessityReport {
  double gamma = 0.0;
  double t = 0.0;
  double implied_Lp = 0.0;  // (1 - gamma) / (2 t)
  double worst_ratio = 0.0; // max gap / ((t/(1-gamma)) ||xi||^2); <= 1 means pass
  std::size_t n_samples = 0;
  bool pass = true;
};

// Checks D* - D(lambda) <= (t/(1-gamma)) ||xi||^2 on every sample. Requires
// 0 <= gamma < 1 and t > 0. Fixed-point samples (gap and xi both ~0) pass.
NecessityReport necessity_probe(const SeparableProblem& p, const OptimalPair& opt, double gamma, double t,
                                const std::vector<Vector>& lambdas);

// {"Lp_hat", "n_samples", "worst_sample": {"lambda", "gap", "xi_norm_sq"}}
std::string pl_report_json(const PlEstimate& e);
std::string pl_report_csv(const PlEstimate& e);

}  // namespace admmlab
