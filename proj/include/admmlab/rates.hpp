#pragma once

// Closed-form rate bounds and parameter conversions. Every formula enforces the
// regime in which it is proven and throws OutOfRegime outside it.

#include <optional>
#include <string>
#include <vector>

namespace admmlab {

struct RateParams {
  double c1 = 0.0;
  double c2 = 0.0;
  double t = 1.0;
  int N = 0;
  std::optional<double> Lp;
  std::optional<double> L;
  std::optional<double> mu1;
  std::optional<double> mu2;
  std::optional<double> lam_max_AtA;
  std::optional<double> lam_max_BtB;
  std::optional<double> lam_min_AAt;
  std::optional<double> lam_min_BBt;
};

// Delta / (4 N t); needs t <= c1, N >= 4, Delta >= 0.
double bound_dual_gap(double Delta, double t, int N, double c1);
// sqrt(Delta) / (t N).
double bound_primal_residual(double Delta, double t, int N, double c1);
// sqrt(Delta) / ((N-1) t), bound on ||z^N - z^{N-1}||_B.
double bound_dual_residual(double Delta, double t, int N, double c1);

// Strongly convex f and g: dist1_sq / (2 t (N-1)) where dist1_sq = ||lambda^1 - lambda*||^2.
// Needs mu1, mu2, lam_max_AtA, lam_max_BtB, N >= 2 and
// t <= cbrt(mu1 mu2^2 / (lam_max_AtA lam_max_BtB^2)).
double goldstein_bound(const RateParams& p, double dist1_sq);
double goldstein_step_cap(const RateParams& p);

// Contraction factor of D* - D(lambda^k) over one step under the PL inequality.
// Needs c1, c2, Lp > 0 and 0 < t <= sqrt(c1 c2).
double pl_linear_rate(double c1, double c2, double t, double Lp);
// Special case t = sqrt(c1 c2) with c1 >= c2: 1 / (1 + Lp (2 sqrt(c1 c2) - c2)).
double pl_linear_rate_boundary(double c1, double c2, double Lp);

enum class Scenario { S1, S2 };
std::string to_string(Scenario s);
Scenario parse_scenario(const std::string& tag);

struct Contraction {
  double factor = 0.0;           // V^{k+1} <= factor * V^k
  double rho_coefficient = 0.0;  // rho = V^0 * rho_coefficient
  double bound(double V0, int N) const;  // rho * factor^N
};

// S1: f L-smooth and c1-strongly convex relative to A (A full row rank),
//     t < min{c1, sqrt(c1 L / lam_min_AAt)}; factor 1 - 2 c1 t/(c1 d + 2 c1 t + t^2),
//     d = L / lam_min_AAt, rho coefficient factor^-4 / (16 t).
// S2: g L-smooth (B full row rank), t < min{c1/2, L/(2 lam_min_BBt)};
//     factor (L/(L + t lam_min_BBt))^2, rho coefficient factor^-5 / (16 t).
// When p.N > 0 it must be >= 4 (S1) or >= 5 (S2) for the rho form.
Contraction rlinear_contraction(Scenario s, const RateParams& p);

// Lp = 1/(La tau^2).
double eb_to_pl(double La, double tau);
// tau = Lp/(1 + a Lp).
double pl_to_eb(double Lp, double a);

struct RateRow {
  std::string formula;
  std::string params;  // "name=value;..." in fixed order
  double value = 0.0;
  bool in_regime = false;
};

// Evaluates every applicable formula at p (Delta and dist1_sq default to 1);
// formulas out of regime are listed with in_regime = false and value NaN.
std::vector<RateRow> rate_table(const RateParams& p, double Delta = 1.0);
std::string rate_table_to_csv(const std::vector<RateRow>& rows);
std::string rate_table_to_json(const std::vector<RateRow>& rows);

}  // namespace admmlab
