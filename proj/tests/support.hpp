#pragma once

// Seeded instance generators shared by the unit and acceptance tests.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "admmlab/admm.hpp"
#include "admmlab/plq.hpp"

namespace testsupport {

using admmlab::AffinePiece;
using admmlab::Matrix;
using admmlab::OptimalPair;
using admmlab::PlqFunction;
using admmlab::SeparableProblem;
using admmlab::Vector;

struct Instance {
  SeparableProblem problem;
  OptimalPair optimal;
  double c1 = 0.0;
};

// A PLQ function whose subdifferential at x0 contains target, built as a kink
// at x0 plus one piece that is inactive there.
inline PlqFunction plq_through(std::mt19937_64& rng, double q, double x0, double target, bool kink) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double s = target - q * x0;
  std::vector<AffinePiece> pieces;
  if (kink) {
    const double s1 = s - u(rng), s2 = s + u(rng);
    pieces.push_back({s1, -s1 * x0});
    pieces.push_back({s2, -s2 * x0});
  } else {
    pieces.push_back({s, -s * x0});
  }
  const double s3 = 4.0 * u(rng) - 2.0;
  pieces.push_back({s3, -s3 * x0 - 1.0 - u(rng)});
  return PlqFunction(q, pieces);
}

inline double value_at(const std::vector<PlqFunction>& fs, const Vector& x) {
  double v = 0.0;
  for (std::size_t i = 0; i < fs.size(); ++i) v += fs[i].value(x[i]);
  return v;
}

// Random separable PLQ instance with diagonal A, B and a known saddle point.
// f has q > 0 on every coordinate, so it is strongly convex relative to ||.||_A
// with modulus c1 = min q_i / a_i^2. translated = true puts the saddle point at
// x* = z* = 0, b = 0.
inline Instance random_plq(std::uint64_t seed, std::size_t n, bool translated) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Instance inst;
  auto& p = inst.problem;
  p.A = Matrix(n, n);
  p.B = Matrix(n, n);
  Vector xs(n), zs(n), ls(n);
  std::vector<PlqFunction> fs, gs;
  inst.c1 = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const double a = (u(rng) < 0.5 ? -1.0 : 1.0) * (0.5 + u(rng));
    const double b = (u(rng) < 0.5 ? -1.0 : 1.0) * (0.5 + u(rng));
    p.A(i, i) = a;
    p.B(i, i) = b;
    xs[i] = translated ? 0.0 : 2.0 * u(rng) - 1.0;
    zs[i] = translated ? 0.0 : 2.0 * u(rng) - 1.0;
    ls[i] = 2.0 * u(rng) - 1.0;
    const double q = 0.5 + 1.5 * u(rng);
    const double qg = u(rng) < 0.3 ? 0.0 : u(rng);
    fs.push_back(plq_through(rng, q, xs[i], -a * ls[i], u(rng) < 0.6));
    gs.push_back(plq_through(rng, qg, zs[i], -b * ls[i], u(rng) < 0.6));
    inst.c1 = std::min(inst.c1, q / (a * a));
  }
  p.b = admmlab::numkit::add(p.A.apply(xs), p.B.apply(zs));
  inst.optimal = {xs, zs, ls, value_at(fs, xs), value_at(gs, zs)};
  p.f = std::move(fs);
  p.g = std::move(gs);
  return inst;
}

inline Vector random_vector(std::mt19937_64& rng, std::size_t n, double radius) {
  std::uniform_real_distribution<double> u(-radius, radius);
  Vector v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

// Separable quadratic instance (one affine piece per coordinate) with known
// saddle point; f_i = q_i/2 x^2 + s_i x, g_i = p_i/2 z^2 + r_i z.
struct QuadraticSpec {
  double q_lo, q_hi;  // f curvature
  double p_lo, p_hi;  // g curvature
  double a_lo, a_hi;  // |A_ii|
  double b_lo, b_hi;  // |B_ii|
};

struct QuadraticInstance {
  Instance inst;
  double L_f = 0.0, L_g = 0.0;
  double lam_min_AAt = 0.0, lam_min_BBt = 0.0;
};

inline QuadraticInstance random_quadratic(std::uint64_t seed, std::size_t n, const QuadraticSpec& s) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto in = [&](double lo, double hi) { return lo + (hi - lo) * u(rng); };
  QuadraticInstance out;
  auto& inst = out.inst;
  auto& p = inst.problem;
  p.A = Matrix(n, n);
  p.B = Matrix(n, n);
  Vector xs(n), zs(n), ls(n);
  std::vector<PlqFunction> fs, gs;
  inst.c1 = std::numeric_limits<double>::infinity();
  out.lam_min_AAt = out.lam_min_BBt = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const double a = in(s.a_lo, s.a_hi), b = in(s.b_lo, s.b_hi);
    const double q = in(s.q_lo, s.q_hi), pg = in(s.p_lo, s.p_hi);
    p.A(i, i) = a;
    p.B(i, i) = b;
    xs[i] = in(-1.0, 1.0);
    zs[i] = in(-1.0, 1.0);
    ls[i] = in(-1.0, 1.0);
    const double sf = -a * ls[i] - q * xs[i];
    const double sg = -b * ls[i] - pg * zs[i];
    fs.push_back(PlqFunction(q, {{sf, 0.0}}));
    gs.push_back(PlqFunction(pg, {{sg, 0.0}}));
    inst.c1 = std::min(inst.c1, q / (a * a));
    out.L_f = std::max(out.L_f, q);
    out.L_g = std::max(out.L_g, pg);
    out.lam_min_AAt = std::min(out.lam_min_AAt, a * a);
    out.lam_min_BBt = std::min(out.lam_min_BBt, b * b);
  }
  p.b = admmlab::numkit::add(p.A.apply(xs), p.B.apply(zs));
  inst.optimal = {xs, zs, ls, value_at(fs, xs), value_at(gs, zs)};
  p.f = std::move(fs);
  p.g = std::move(gs);
  return out;
}

}  // namespace testsupport
