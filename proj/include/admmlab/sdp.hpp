#pragma once

// Small dense semidefinite programs over one Gram block Y and a vector of free
// scalars:
//   maximize  <objective>(Y, w)
//   s.t.      <lhs_i>(Y, w)  (<= or =)  rhs_i,   Y PSD.
// Solved by an infeasible-start primal-dual interior point method (Nesterov-Todd
// direction, Mehrotra predictor-corrector).

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "admmlab/numkit.hpp"

namespace admmlab {

using numkit::SymMatrix;
using numkit::Vector;

// value = sum_{i<=j} gram[(i,j)] * Y(i,j) + sum_k free[k] * w_k + constant.
// Off-diagonal coefficients multiply the single entry Y(i,j), so the matching
// symmetric matrix F has F(i,j) = F(j,i) = gram[(i,j)] / 2.
struct LinearFunctional {
  std::map<std::pair<int, int>, double> gram;
  std::map<int, double> free;
  double constant = 0.0;

  void add_gram(int i, int j, double v);
  void add_free(int k, double v);
  // Adds s * <u, v> where u, v are coordinate vectors in the Gram basis.
  void add_inner(std::span<const double> u, std::span<const double> v, double s);
  void prune();  // drops exact zeros

  double evaluate(const SymMatrix& Y, std::span<const double> w) const;
  bool operator==(const LinearFunctional& o) const = default;
};

enum class Relation { LessEqual, Equal };

struct SdpConstraint {
  LinearFunctional lhs;
  Relation relation = Relation::LessEqual;
  double rhs = 0.0;
  std::string label;
};

struct SdpProblem {
  int gram_dim = 0;
  int num_free = 0;
  std::vector<std::string> gram_names;
  std::vector<std::string> free_names;
  LinearFunctional objective;  // maximized
  std::vector<SdpConstraint> constraints;
  // Feasibility-form problems compare the optimum against this level.
  std::optional<double> threshold;

  // Throws InvalidInput when a functional touches an undeclared variable.
  void validate() const;
};

enum class SdpStatus { optimal, max_iter, infeasible };
std::string to_string(SdpStatus s);

// Stops when the relative duality gap is <= tol and the relative primal and
// dual infeasibilities are <= feas_tol.
struct SdpOptions {
  double tol = 1e-8;
  double feas_tol = 1e-7;
  int max_iter = 150;
};

struct SdpSolution {
  double value = 0.0;       // primal objective (maximization sense)
  double dual_value = 0.0;  // dual objective (maximization sense)
  SymMatrix Y{1};
  Vector free_values;
  Vector multipliers;  // y, one per constraint
  double duality_gap = 0.0;
  double primal_infeasibility = 0.0;
  double dual_infeasibility = 0.0;
  int iterations = 0;
  SdpStatus status = SdpStatus::max_iter;
};

// Preconditions: gram_dim <= 64, at most 2000 constraints.
SdpSolution sdp_solve(const SdpProblem& sdp, const SdpOptions& opt = {});

// Largest violation of the constraints at (Y, w); negative slack counts as 0.
double constraint_violation(const SdpProblem& sdp, const SymMatrix& Y, std::span<const double> w);

std::string solution_to_json(const SdpSolution& s);

}  // namespace admmlab
