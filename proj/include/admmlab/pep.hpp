#pragma once

// Performance-estimation problems for N steps of ADMM, relaxed to SDPs over a
// Gram matrix of A- and B-mapped iterates, and the two-step linear-rate variant.
//
// Gram columns of the N-step problem (dimension 2N+6):
//   0            A x_dag       (lambda^0 = A x_dag + B z_dag)
//   1..N+1       A x^1 .. A x^{N+1}   (x^{N+1} minimizes the Lagrangian at lambda^N)
//   N+2          A x_bar       (lambda* = A x_bar + B z_bar)
//   N+3          B z_dag
//   N+4..2N+4    B z^0 .. B z^N
//   2N+5         B z_bar
// Free scalars (2N+3): f^1..f^{N+1}, f*, g^1..g^N, g*.
// The problem is normalized to b = 0 and (x*, z*) = (0, 0).

#include <string>
#include <vector>

#include "admmlab/admm.hpp"
#include "admmlab/sdp.hpp"

namespace admmlab {

enum class PepObjective { dual_gap, primal_residual_sq, dual_residual_sq };
std::string to_string(PepObjective o);
PepObjective parse_pep_objective(const std::string& tag);

struct PepParams {
  int N = 4;
  double t = 1.0;
  double c1 = 1.0;
  double c2 = 0.0;
  double Delta = 1.0;
  PepObjective objective = PepObjective::dual_gap;
};

// Ordered pair (i, j), i != j, of the interpolation inequality
//   (c/2)||p_i - p_j||^2 - <u_j, p_i - p_j> - h_i + h_j <= 0,
// where p are mapped points, -M^T u_j is the subgradient at p_j and h the values.
struct InterpolationTemplate {
  int i = 0;
  int j = 0;
  double modulus = 0.0;
};

// All ordered pairs; throws InvalidInput when point_count < 2 or modulus < 0.
std::vector<InterpolationTemplate> interpolation_block(int point_count, double modulus);

// One interpolation point: Gram-basis coordinates of the mapped point and of
// the vector u, plus the index of its function value among the free scalars.
struct InterpolationPoint {
  Vector point;
  Vector u;
  int value_index = 0;
  std::string name;
};

// Appends one constraint per template to sdp.
void emit_interpolation(SdpProblem& sdp, const std::vector<InterpolationPoint>& pts,
                        const std::vector<InterpolationTemplate>& block, const std::string& tag);

SdpProblem build_pep(const PepParams& params);

struct RatePepParams {
  double t = 1.0;
  double c1 = 1.0;
  double c2 = 1.0;
  double Lp = 0.5;
};

// Two-step problem with the denominator D(lambda*) - D(lambda^1) fixed to 1 and
// the numerator D(lambda*) - D(lambda^2) maximized. Its optimum is a relaxation
// optimum for the contraction ratio, stored together with threshold = alpha.
// Throws InvalidInput unless 0 < alpha < 1 and t, c1, c2, Lp > 0.
SdpProblem build_rate_pep(const RatePepParams& params, double alpha);

struct RatePepResult {
  double relaxation_optimum = 0.0;
  double alpha = 0.0;
  bool exceeds_alpha = false;
  SdpStatus status = SdpStatus::max_iter;
};

RatePepResult solve_rate_pep(const RatePepParams& params, double alpha, const SdpOptions& opt = {});

struct ConjectureReport {
  int N = 0;
  double t = 0.0, c1 = 0.0, c2 = 0.0, Delta = 1.0;
  double dual_gap_sdp = 0.0;
  double dual_gap_conjectured = 0.0;
  double primal_residual_sdp = 0.0;  // square root of the squared-residual optimum
  double primal_residual_conjectured = 0.0;
  SdpStatus dual_gap_status = SdpStatus::max_iter;
  SdpStatus primal_status = SdpStatus::max_iter;

  double dual_gap_difference() const { return dual_gap_sdp - dual_gap_conjectured; }
  double primal_residual_difference() const { return primal_residual_sdp - primal_residual_conjectured; }
};

// Delta / (4Nt + 2 c1 c2/(c1+c2)) and sqrt(Delta) / (Nt + c1 c2/(c1+c2)).
double conjectured_dual_gap(int N, double t, double c1, double c2, double Delta);
double conjectured_primal_residual(int N, double t, double c1, double c2, double Delta);

// Exploratory: solves both PEPs and reports against the conjectured formulas.
// Requires c1, c2 > 0, t <= c1, N >= 4.
ConjectureReport check_conjecture(int N, double t, double c1, double c2, double Delta = 1.0,
                                  const SdpOptions& opt = {});
std::string conjecture_to_json(const ConjectureReport& r);

struct GramImage {
  SymMatrix Y{1};
  Vector free_values;
  double objective = 0.0;
};

// Gram matrix and function values of an actual run of N = params.N iterations,
// in the layout of build_pep, translated so that (x*, z*) = (0, 0). Uses
// A x_dag = lambda^0, B z_dag = 0, A x_bar = lambda*, B z_bar = 0, and the
// Lagrangian minimizer at lambda^N as x^{N+1}.
GramImage embed_trace(const SeparableProblem& p, const AdmmTrace& trace, const OptimalPair& opt,
                      const PepParams& params);

}  // namespace admmlab
