#pragma once

// Scalar piecewise-linear-quadratic functions h(x) = (q/2) x^2 + max_i (s_i x + c_i),
// their exact proximal-type minimization, and separable problems built from them.

#include <cstddef>
#include <memory>
#include <variant>
#include <vector>

#include "admmlab/numkit.hpp"

namespace admmlab {

using numkit::Matrix;
using numkit::Vector;

struct AffinePiece {
  double slope = 0.0;
  double intercept = 0.0;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double v, double tol = 0.0) const { return v >= lo - tol && v <= hi + tol; }
  // Distance from v to the interval, 0 when inside.
  double distance(double v) const;
};

class PlqFunction {
 public:
  // Throws InvalidInput when q < 0, pieces is empty, or any number is non-finite.
  PlqFunction(double q, std::vector<AffinePiece> pieces);

  static PlqFunction quadratic(double q) { return PlqFunction(q, {{0.0, 0.0}}); }
  // alpha |x| + (q/2) x^2
  static PlqFunction abs(double alpha, double q = 0.0) {
    return PlqFunction(q, {{alpha, 0.0}, {-alpha, 0.0}});
  }

  double q() const { return q_; }
  const std::vector<AffinePiece>& pieces() const { return pieces_; }
  double min_slope() const;
  double max_slope() const;

  double value(double x) const;
  // q x + [min, max] of the slopes of the pieces attaining the max at x.
  Interval subdiff(double x) const;

 private:
  double q_;
  std::vector<AffinePiece> pieces_;
};

double plq_value(const PlqFunction& h, double x);
Interval plq_subdiff(const PlqFunction& h, double x);

// argmin_x h(x) + lin x + (quad/2) x^2. Flat minimizing sets resolve to their
// leftmost point. Throws Unbounded when q + quad == 0 and -lin lies outside the
// slope range.
double plq_argmin_quadratic(const PlqFunction& h, double lin, double quad);

// Coordinate-wise plq_argmin_quadratic. An Unbounded error carries the coordinate.
Vector separable_argmin(const std::vector<PlqFunction>& fs, std::span<const double> lin,
                        std::span<const double> quad_diag);

// Black-box convex function with an exact minimization oracle.
class ConvexOracle {
 public:
  virtual ~ConvexOracle() = default;
  virtual std::size_t dim() const = 0;
  virtual double value(std::span<const double> x) const = 0;
  // argmin_x h(x) + <lin, x> + (1/2) x^T Q x; throws Unbounded when unbounded below.
  virtual Vector argmin(std::span<const double> lin, const Matrix& Q) const = 0;
};

// h(x) = (1/2) x^T P x + <c, x> with P symmetric PSD.
class QuadraticOracle final : public ConvexOracle {
 public:
  QuadraticOracle(Matrix P, Vector c);
  std::size_t dim() const override { return c_.size(); }
  double value(std::span<const double> x) const override;
  Vector argmin(std::span<const double> lin, const Matrix& Q) const override;
  const Matrix& P() const { return P_; }

 private:
  Matrix P_;
  Vector c_;
};

using SideFunction = std::variant<std::vector<PlqFunction>, std::shared_ptr<const ConvexOracle>>;

std::size_t side_dim(const SideFunction& h);
double side_value(const SideFunction& h, std::span<const double> x);
const std::vector<PlqFunction>* side_plq(const SideFunction& h);

// min f(x) + g(z) subject to A x + B z = b.
struct SeparableProblem {
  SideFunction f;
  SideFunction g;
  Matrix A;
  Matrix B;
  Vector b;

  std::size_t n() const { return A.cols(); }
  std::size_t m() const { return B.cols(); }
  std::size_t r() const { return A.rows(); }

  // Throws InvalidInput on inconsistent dimensions, zero A or B, or non-finite data.
  void validate() const;
};

// argmin_x h(x) + <lin, x> + (1/2) x^T Q x for one side of a problem.
// PLQ sides need Q diagonal, or every coordinate a single-piece function
// (then a dense solve); anything else is InvalidInput.
Vector side_argmin(const SideFunction& h, std::span<const double> lin, const Matrix& Q);

struct OptimalPair {
  Vector x_star;
  Vector z_star;
  Vector lambda_star;
  double f_star = 0.0;
  double g_star = 0.0;
};

// Largest c with diag(q) - c A^T A PSD, i.e. the modulus of strong convexity of
// a PLQ f relative to ||.||_A. Returns 0 for oracle sides.
double relative_modulus(const SideFunction& f, const Matrix& A);

// Worst violation of the saddle-point conditions of opt: primal feasibility
// and subgradient membership of -A^T lambda*, -B^T lambda* (PLQ sides only).
double optimal_pair_violation(const SeparableProblem& p, const OptimalPair& opt);

}  // namespace admmlab
