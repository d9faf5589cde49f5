#pragma once

// Scalar worst-case instances that attain the dual-gap, primal-residual and
// dual-residual bounds, and the l1-plus-quadratic instance whose dual satisfies
// a PL inequality.

#include <optional>
#include <string>
#include <vector>

#include "admmlab/admm.hpp"

namespace admmlab {

enum class GalleryKind { dual_gap_tight, primal_residual_tight, dual_residual_tight, pl_l1_quadratic };

std::string to_string(GalleryKind k);
// Throws UnsupportedKind for unknown tags.
GalleryKind parse_gallery_kind(const std::string& tag);

struct GalleryInstance {
  SeparableProblem problem;
  AdmmConfig config;
  OptimalPair optimal;
};

// Tight kinds: N >= 4 and 0 < t <= c1; n is ignored.
// pl_l1_quadratic: n >= 1, t > 0; N >= 1; c1 is ignored.
GalleryInstance make_instance(GalleryKind kind, int N, double t, double c1, int n = 1);

struct ExpectedTrace {
  std::vector<double> xs;       // x^1..x^N at index k-1
  std::vector<double> zs;       // z^0..z^N
  std::vector<double> lambdas;  // lambda^0..lambda^N
  double target = 0.0;          // value the instance attains at iteration N
};

// Throws UnsupportedKind for pl_l1_quadratic, InvalidInput when N < 4 or t <= 0.
ExpectedTrace expected_trace(GalleryKind kind, int N, double t);

// Sum of h(lambda_i) with h(s) = -(s-1)^2 for s > 1, 0 on [-1, 1], -(s+1)^2 for s < -1.
double pl_dual_closed_form(std::span<const double> lambda);

// Metric attained at iteration N: dual gap D* - D(lambda^N), primal residual
// ||Ax^N + Bz^N - b||, or dual residual ||B(z^N - z^{N-1})||.
double measured_metric(GalleryKind kind, const GalleryInstance& inst, const AdmmTrace& trace);

}  // namespace admmlab
