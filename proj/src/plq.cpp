#include "admmlab/plq.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "admmlab/errors.hpp"

namespace admmlab {

double Interval::distance(double v) const {
  if (v < lo) return lo - v;
  if (v > hi) return v - hi;
  return 0.0;
}

PlqFunction::PlqFunction(double q, std::vector<AffinePiece> pieces)
    : q_(q), pieces_(std::move(pieces)) {
  if (!std::isfinite(q) || q < 0.0) throw InvalidInput("PlqFunction: q must be finite and >= 0");
  if (pieces_.empty()) throw InvalidInput("PlqFunction: at least one affine piece is required");
  for (const auto& p : pieces_)
    if (!std::isfinite(p.slope) || !std::isfinite(p.intercept))
      throw InvalidInput("PlqFunction: non-finite piece");
}

double PlqFunction::min_slope() const {
  double s = pieces_.front().slope;
  for (const auto& p : pieces_) s = std::min(s, p.slope);
  return s;
}

double PlqFunction::max_slope() const {
  double s = pieces_.front().slope;
  for (const auto& p : pieces_) s = std::max(s, p.slope);
  return s;
}

namespace {

double envelope(const std::vector<AffinePiece>& pieces, double x) {
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& p : pieces) m = std::max(m, p.slope * x + p.intercept);
  return m;
}

// Absolute slack used to decide which pieces are active at x.
double activity_tolerance(const std::vector<AffinePiece>& pieces, double x) {
  double scale = 1.0;
  for (const auto& p : pieces) scale = std::max(scale, std::abs(p.slope * x) + std::abs(p.intercept));
  return 1e-12 * scale;
}

}  // namespace

double PlqFunction::value(double x) const { return 0.5 * q_ * x * x + envelope(pieces_, x); }

Interval PlqFunction::subdiff(double x) const {
  const double m = envelope(pieces_, x);
  const double tol = activity_tolerance(pieces_, x);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& p : pieces_) {
    if (p.slope * x + p.intercept >= m - tol) {
      lo = std::min(lo, p.slope);
      hi = std::max(hi, p.slope);
    }
  }
  return {q_ * x + lo, q_ * x + hi};
}

double plq_value(const PlqFunction& h, double x) { return h.value(x); }

Interval plq_subdiff(const PlqFunction& h, double x) { return h.subdiff(x); }

double plq_argmin_quadratic(const PlqFunction& h, double lin, double quad) {
  if (!std::isfinite(lin) || !std::isfinite(quad) || quad < 0.0)
    throw InvalidInput("plq_argmin_quadratic: need finite lin and quad >= 0");
  const double Q = h.q() + quad;
  const auto& pieces = h.pieces();
  const double smin = h.min_slope();
  const double smax = h.max_slope();

  if (Q == 0.0) {
    const double slack = 1e-14 * (1.0 + std::abs(lin) + std::abs(smin) + std::abs(smax));
    if (-lin < smin - slack || -lin > smax + slack)
      throw Unbounded("plq_argmin_quadratic: objective is unbounded below");
    if (smin == smax) return 0.0;
  }

  std::vector<double> candidates;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    if (Q > 0.0) candidates.push_back(-(lin + pieces[i].slope) / Q);
    for (std::size_t j = i + 1; j < pieces.size(); ++j) {
      const double ds = pieces[i].slope - pieces[j].slope;
      if (ds != 0.0) candidates.push_back((pieces[j].intercept - pieces[i].intercept) / ds);
    }
  }
  std::sort(candidates.begin(), candidates.end());

  auto objective = [&](double x) { return h.value(x) + lin * x + 0.5 * quad * x * x; };
  const double scale = 1.0 + std::abs(lin) + std::abs(smin) + std::abs(smax);
  // Distance from -(lin + quad x) to the subdifferential; zero at a minimizer.
  auto residual = [&](double x) { return h.subdiff(x).distance(-(lin + quad * x)); };

  // Several candidates can pass the tolerance near a kink; the smallest
  // residual wins, then the leftmost.
  double best_x = 0.0;
  double best_res = std::numeric_limits<double>::infinity();
  bool found = false;
  for (double x : candidates) {
    const double r = residual(x);
    if (r > 1e-9 * (scale + std::abs(Q * x))) continue;
    if (!found || r < best_res - 1e-15 * scale) {
      best_res = r;
      best_x = x;
      found = true;
    }
  }
  if (!found) {
    double best_val = std::numeric_limits<double>::infinity();
    for (double x : candidates) {
      const double v = objective(x);
      if (!found || v < best_val - 1e-15 * (1.0 + std::abs(best_val))) {
        best_val = v;
        best_x = x;
        found = true;
      }
    }
  }
  if (!found) throw Unbounded("plq_argmin_quadratic: no minimizer found");
  return best_x;
}

Vector separable_argmin(const std::vector<PlqFunction>& fs, std::span<const double> lin,
                        std::span<const double> quad_diag) {
  if (fs.size() != lin.size() || fs.size() != quad_diag.size())
    throw InvalidInput("separable_argmin: dimension mismatch");
  Vector x(fs.size());
  for (std::size_t i = 0; i < fs.size(); ++i) {
    try {
      x[i] = plq_argmin_quadratic(fs[i], lin[i], quad_diag[i]);
    } catch (const Unbounded& e) {
      throw Unbounded(std::string(e.what()) + " (coordinate " + std::to_string(i) + ")",
                      static_cast<std::ptrdiff_t>(i));
    }
  }
  return x;
}

// ---------------------------------------------------------------- oracles

QuadraticOracle::QuadraticOracle(Matrix P, Vector c) : P_(std::move(P)), c_(std::move(c)) {
  if (P_.rows() != c_.size() || P_.cols() != c_.size())
    throw InvalidInput("QuadraticOracle: dimension mismatch");
}

double QuadraticOracle::value(std::span<const double> x) const {
  return 0.5 * numkit::dot(x, P_.apply(x)) + numkit::dot(c_, x);
}

Vector QuadraticOracle::argmin(std::span<const double> lin, const Matrix& Q) const {
  const std::size_t n = c_.size();
  if (lin.size() != n || Q.rows() != n || Q.cols() != n)
    throw InvalidInput("QuadraticOracle::argmin: dimension mismatch");
  Matrix H(n, n);
  Vector rhs(n);
  for (std::size_t i = 0; i < n; ++i) {
    rhs[i] = -(lin[i] + c_[i]);
    for (std::size_t j = 0; j < n; ++j) H(i, j) = P_(i, j) + Q(i, j);
  }
  try {
    return numkit::lu_solve(std::move(H), std::move(rhs));
  } catch (const InvalidInput&) {
    throw Unbounded("QuadraticOracle::argmin: singular Hessian");
  }
}

// ------------------------------------------------------------------ sides

std::size_t side_dim(const SideFunction& h) {
  if (const auto* fs = std::get_if<std::vector<PlqFunction>>(&h)) return fs->size();
  const auto& o = std::get<std::shared_ptr<const ConvexOracle>>(h);
  return o ? o->dim() : 0;
}

double side_value(const SideFunction& h, std::span<const double> x) {
  if (const auto* fs = std::get_if<std::vector<PlqFunction>>(&h)) {
    if (fs->size() != x.size()) throw InvalidInput("side_value: dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += (*fs)[i].value(x[i]);
    return s;
  }
  return std::get<std::shared_ptr<const ConvexOracle>>(h)->value(x);
}

const std::vector<PlqFunction>* side_plq(const SideFunction& h) {
  return std::get_if<std::vector<PlqFunction>>(&h);
}

void SeparableProblem::validate() const {
  if (const auto* o = std::get_if<std::shared_ptr<const ConvexOracle>>(&f); o && !*o)
    throw InvalidInput("SeparableProblem: null f oracle");
  if (const auto* o = std::get_if<std::shared_ptr<const ConvexOracle>>(&g); o && !*o)
    throw InvalidInput("SeparableProblem: null g oracle");
  if (A.empty() || B.empty()) throw InvalidInput("SeparableProblem: A and B must be nonempty");
  if (A.rows() != B.rows() || b.size() != A.rows())
    throw InvalidInput("SeparableProblem: A, B, b row counts differ");
  if (side_dim(f) != A.cols()) throw InvalidInput("SeparableProblem: dim(f) != columns of A");
  if (side_dim(g) != B.cols()) throw InvalidInput("SeparableProblem: dim(g) != columns of B");
  if (A.is_zero()) throw InvalidInput("SeparableProblem: A must be nonzero");
  if (B.is_zero()) throw InvalidInput("SeparableProblem: B must be nonzero");
  if (!numkit::all_finite(A.data()) || !numkit::all_finite(B.data()) || !numkit::all_finite(b))
    throw InvalidInput("SeparableProblem: non-finite data");
}

Vector side_argmin(const SideFunction& h, std::span<const double> lin, const Matrix& Q) {
  if (const auto* fs = std::get_if<std::vector<PlqFunction>>(&h)) {
    const std::size_t n = fs->size();
    if (lin.size() != n || Q.rows() != n || Q.cols() != n)
      throw InvalidInput("side_argmin: dimension mismatch");
    if (Q.is_diagonal()) {
      Vector d(n);
      for (std::size_t i = 0; i < n; ++i) d[i] = Q(i, i);
      return separable_argmin(*fs, lin, d);
    }
    const bool smooth = std::all_of(fs->begin(), fs->end(),
                                    [](const PlqFunction& p) { return p.pieces().size() == 1; });
    if (!smooth)
      throw InvalidInput(
          "side_argmin: non-diagonal coupling needs single-piece PLQ coordinates or an oracle");
    Matrix H = Q;
    Vector rhs(n);
    for (std::size_t i = 0; i < n; ++i) {
      H(i, i) += (*fs)[i].q();
      rhs[i] = -(lin[i] + (*fs)[i].pieces().front().slope);
    }
    try {
      return numkit::lu_solve(std::move(H), std::move(rhs));
    } catch (const InvalidInput&) {
      throw Unbounded("side_argmin: singular quadratic subproblem");
    }
  }
  return std::get<std::shared_ptr<const ConvexOracle>>(h)->argmin(lin, Q);
}

double relative_modulus(const SideFunction& f, const Matrix& A) {
  const auto* fs = side_plq(f);
  if (!fs) return 0.0;
  const std::size_t n = fs->size();
  const Matrix AtA = numkit::transpose_multiply(A, A);
  auto ok = [&](double c) {
    numkit::SymMatrix M(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j)
        M.set(i, j, (i == j ? (*fs)[i].q() : 0.0) - c * AtA(i, j));
    return numkit::psd_check(M, 1e-13 * (1.0 + M.frobenius_norm())).is_psd;
  };
  double qmax = 0.0;
  for (const auto& p : *fs) qmax = std::max(qmax, p.q());
  double dmin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i)
    if (AtA(i, i) > 0.0) dmin = std::min(dmin, AtA(i, i));
  if (qmax == 0.0 || !std::isfinite(dmin)) return 0.0;
  double lo = 0.0;
  double hi = qmax / dmin;
  if (ok(hi)) return hi;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (ok(mid) ? lo : hi) = mid;
  }
  return lo;
}

double optimal_pair_violation(const SeparableProblem& p, const OptimalPair& opt) {
  Vector res = numkit::add(p.A.apply(opt.x_star), p.B.apply(opt.z_star));
  res = numkit::sub(res, p.b);
  double worst = numkit::norm(res);
  auto check = [&](const SideFunction& h, const Matrix& M, const Vector& pt) {
    const auto* fs = side_plq(h);
    if (!fs) return;
    const Vector u = M.apply_transpose(opt.lambda_star);
    for (std::size_t i = 0; i < fs->size(); ++i)
      worst = std::max(worst, (*fs)[i].subdiff(pt[i]).distance(-u[i]));
  };
  check(p.f, p.A, opt.x_star);
  check(p.g, p.B, opt.z_star);
  return worst;
}

}  // namespace admmlab
