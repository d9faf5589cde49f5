#include "admmlab/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "admmlab/errors.hpp"

namespace admmlab {

using numkit::Matrix;

void LinearFunctional::add_gram(int i, int j, double v) {
  if (i > j) std::swap(i, j);
  gram[{i, j}] += v;
}

void LinearFunctional::add_free(int k, double v) { free[k] += v; }

void LinearFunctional::add_inner(std::span<const double> u, std::span<const double> v, double s) {
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u[i] == 0.0) continue;
    for (std::size_t j = 0; j < v.size(); ++j) {
      if (v[j] == 0.0) continue;
      add_gram(static_cast<int>(i), static_cast<int>(j), s * u[i] * v[j]);
    }
  }
}

void LinearFunctional::prune() {
  std::erase_if(gram, [](const auto& kv) { return kv.second == 0.0; });
  std::erase_if(free, [](const auto& kv) { return kv.second == 0.0; });
}

double LinearFunctional::evaluate(const SymMatrix& Y, std::span<const double> w) const {
  double s = constant;
  for (const auto& [ij, v] : gram) s += v * Y(static_cast<std::size_t>(ij.first), static_cast<std::size_t>(ij.second));
  for (const auto& [k, v] : free) s += v * w[static_cast<std::size_t>(k)];
  return s;
}

void SdpProblem::validate() const {
  if (gram_dim < 1) throw InvalidInput("SdpProblem: gram_dim must be positive");
  if (num_free < 0) throw InvalidInput("SdpProblem: num_free must be >= 0");
  auto check = [&](const LinearFunctional& f, const std::string& where) {
    for (const auto& [ij, v] : f.gram) {
      if (ij.first < 0 || ij.second >= gram_dim || ij.first > ij.second)
        throw InvalidInput("SdpProblem: " + where + " touches an undeclared Gram entry");
      if (!std::isfinite(v)) throw InvalidInput("SdpProblem: " + where + " has a non-finite coefficient");
    }
    for (const auto& [k, v] : f.free) {
      if (k < 0 || k >= num_free) throw InvalidInput("SdpProblem: " + where + " touches an undeclared free scalar");
      if (!std::isfinite(v)) throw InvalidInput("SdpProblem: " + where + " has a non-finite coefficient");
    }
  };
  check(objective, "objective");
  for (std::size_t i = 0; i < constraints.size(); ++i) {
    check(constraints[i].lhs, "constraint " + std::to_string(i));
    if (!std::isfinite(constraints[i].rhs)) throw InvalidInput("SdpProblem: non-finite right-hand side");
  }
}

std::string to_string(SdpStatus s) {
  switch (s) {
    case SdpStatus::optimal: return "optimal";
    case SdpStatus::max_iter: return "max_iter";
    case SdpStatus::infeasible: return "infeasible";
  }
  return "?";
}

double constraint_violation(const SdpProblem& sdp, const SymMatrix& Y, std::span<const double> w) {
  double worst = 0.0;
  for (const auto& c : sdp.constraints) {
    const double d = c.lhs.evaluate(Y, w) - c.rhs;
    worst = std::max(worst, c.relation == Relation::Equal ? std::abs(d) : std::max(0.0, d));
  }
  return worst;
}

std::string solution_to_json(const SdpSolution& s) {
  nlohmann::json j;
  j["value"] = s.value;
  j["dual_value"] = s.dual_value;
  j["status"] = to_string(s.status);
  j["duality_gap"] = s.duality_gap;
  j["primal_infeasibility"] = s.primal_infeasibility;
  j["dual_infeasibility"] = s.dual_infeasibility;
  j["iterations"] = s.iterations;
  return j.dump(2);
}

// ------------------------------------------------------------------ solver

namespace {

struct Entry {
  int k;
  int l;
  double v;  // symmetric matrix entry F(k,l) = F(l,k)
};

double frob_inner(const Matrix& a, const Matrix& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) s += a.data()[i] * b.data()[i];
  return s;
}

Matrix sym(const Matrix& a) {
  Matrix s(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) s(i, j) = 0.5 * (a(i, j) + a(j, i));
  return s;
}

Matrix lincomb(double a, const Matrix& x, double b, const Matrix& y) {
  Matrix r(x.rows(), x.cols());
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j) r(i, j) = a * x(i, j) + b * y(i, j);
  return r;
}

SymMatrix to_sym(const Matrix& a) { return SymMatrix::from_matrix(a); }

double max_lp_step(const Vector& s, const Vector& ds) {
  double a = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < s.size(); ++i)
    if (ds[i] < 0.0) a = std::min(a, -s[i] / ds[i]);
  return a;
}

// LU factorization with partial pivoting of the saddle matrix [M H; H^T 0],
// followed by iterative refinement. No pivot threshold: near-singular systems
// are expected close to the optimum and the refinement absorbs most of the loss.
class SaddleSolver {
 public:
  static std::optional<SaddleSolver> make(const SymMatrix& M, const Matrix& H) {
    SaddleSolver s;
    const std::size_t m = M.size(), q = H.cols(), n = m + q;
    s.K_ = Matrix(n, n);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) s.K_(i, j) = M(i, j);
      for (std::size_t k = 0; k < q; ++k) s.K_(i, m + k) = s.K_(m + k, i) = H(i, k);
    }
    s.LU_ = s.K_;
    s.perm_.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
      std::size_t piv = k;
      for (std::size_t i = k + 1; i < n; ++i)
        if (std::abs(s.LU_(i, k)) > std::abs(s.LU_(piv, k))) piv = i;
      s.perm_[k] = piv;
      if (s.LU_(piv, k) == 0.0 || !std::isfinite(s.LU_(piv, k))) return std::nullopt;
      if (piv != k) std::swap_ranges(s.LU_.row(k).begin(), s.LU_.row(k).end(), s.LU_.row(piv).begin());
      const double pivot = s.LU_(k, k);
      for (std::size_t i = k + 1; i < n; ++i) {
        const double f = s.LU_(i, k) / pivot;
        s.LU_(i, k) = f;
        if (f == 0.0) continue;
        for (std::size_t j = k + 1; j < n; ++j) s.LU_(i, j) -= f * s.LU_(k, j);
      }
    }
    return s;
  }

  std::optional<Vector> solve(const Vector& rhs) const {
    Vector x = solve_once(rhs);
    for (int round = 0; round < 3; ++round) {
      const Vector r = numkit::sub(rhs, K_.apply(x));
      x = numkit::add(x, solve_once(r));
    }
    if (!numkit::all_finite(x)) return std::nullopt;
    return x;
  }

 private:
  Vector solve_once(Vector b) const {
    const std::size_t n = b.size();
    for (std::size_t k = 0; k < n; ++k)
      if (perm_[k] != k) std::swap(b[k], b[perm_[k]]);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = k + 1; i < n; ++i) b[i] -= LU_(i, k) * b[k];
    for (std::size_t i = n; i-- > 0;) {
      double v = b[i];
      for (std::size_t j = i + 1; j < n; ++j) v -= LU_(i, j) * b[j];
      b[i] = v / LU_(i, i);
    }
    return b;
  }

  Matrix K_;
  Matrix LU_;
  std::vector<std::size_t> perm_;
};

}  // namespace

SdpSolution sdp_solve(const SdpProblem& sdp, const SdpOptions& opt) {
  sdp.validate();
  if (sdp.gram_dim > 64) throw InvalidInput("sdp_solve: gram_dim above 64");
  if (sdp.constraints.size() > 2000) throw InvalidInput("sdp_solve: more than 2000 constraints");

  const auto n0 = static_cast<std::size_t>(sdp.gram_dim);
  const std::size_t m = sdp.constraints.size();
  const auto qall = static_cast<std::size_t>(sdp.num_free);

  // Row data in minimization form, each row scaled to unit norm.
  std::vector<std::vector<Entry>> A(m);
  std::vector<Matrix> Adense(m, Matrix(n0, n0));
  Matrix Hall(m, qall);
  Vector b(m), rho(m, 1.0);
  std::vector<std::size_t> slack_row;
  for (std::size_t i = 0; i < m; ++i) {
    const auto& c = sdp.constraints[i];
    double nrm = 0.0;
    for (const auto& [ij, v] : c.lhs.gram) nrm += ij.first == ij.second ? v * v : 0.5 * v * v;
    for (const auto& [k, v] : c.lhs.free) nrm += v * v;
    nrm = std::sqrt(nrm);
    if (c.relation == Relation::LessEqual) nrm = std::sqrt(nrm * nrm + 1.0);
    rho[i] = nrm > 0.0 ? nrm : 1.0;
    for (const auto& [ij, v] : c.lhs.gram) {
      const double e = (ij.first == ij.second ? v : 0.5 * v) / rho[i];
      A[i].push_back({ij.first, ij.second, e});
      Adense[i](static_cast<std::size_t>(ij.first), static_cast<std::size_t>(ij.second)) = e;
      Adense[i](static_cast<std::size_t>(ij.second), static_cast<std::size_t>(ij.first)) = e;
    }
    for (const auto& [k, v] : c.lhs.free) Hall(i, static_cast<std::size_t>(k)) = v / rho[i];
    b[i] = (c.rhs - c.lhs.constant) / rho[i];
    if (c.relation == Relation::LessEqual) {
      slack_row.push_back(i);
    }
  }
  const std::size_t p = slack_row.size();
  Vector gcoef(p);  // slack coefficient 1, row-scaled
  for (std::size_t j = 0; j < p; ++j) gcoef[j] = 1.0 / rho[slack_row[j]];

  Matrix C(n0, n0);
  for (const auto& [ij, v] : sdp.objective.gram) {
    const double e = -(ij.first == ij.second ? v : 0.5 * v);
    C(static_cast<std::size_t>(ij.first), static_cast<std::size_t>(ij.second)) = e;
    C(static_cast<std::size_t>(ij.second), static_cast<std::size_t>(ij.first)) = e;
  }
  Vector cw_all(qall, 0.0);
  for (const auto& [k, v] : sdp.objective.free) cw_all[static_cast<std::size_t>(k)] = -v;

  // Restrict Y to the joint range of the data matrices: Y = P Yr P^T with P
  // orthonormal. Directions outside that range never enter a constraint or the
  // objective and would otherwise make the primal optimal set unbounded.
  Matrix P;
  {
    SymMatrix S(n0);
    auto accumulate = [&](const Matrix& F) {
      const Matrix F2 = multiply(F, F);
      for (std::size_t i = 0; i < n0; ++i)
        for (std::size_t j = i; j < n0; ++j) S.add_to(i, j, F2(i, j));
    };
    for (const auto& F : Adense) accumulate(F);
    const double cn = std::sqrt(frob_inner(C, C));
    if (cn > 0.0) accumulate(lincomb(1.0 / cn, C, 0.0, C));
    const auto ed = numkit::eig_sym_full(S);
    const double top = std::max(ed.values.back(), 0.0);
    std::vector<std::size_t> cols;
    for (std::size_t j = 0; j < n0; ++j)
      if (ed.values[j] > 1e-10 * top) cols.push_back(j);
    if (cols.empty()) cols.push_back(n0 - 1);
    P = Matrix(n0, cols.size());
    for (std::size_t c = 0; c < cols.size(); ++c)
      for (std::size_t i = 0; i < n0; ++i) P(i, c) = ed.vectors(i, cols[c]);
  }
  const std::size_t n = P.cols();
  auto reduce = [&](const Matrix& F) { return multiply(transpose_multiply(P, F), P); };
  for (std::size_t i = 0; i < m; ++i) {
    Adense[i] = sym(reduce(Adense[i]));
    A[i].clear();
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t l = k; l < n; ++l)
        if (Adense[i](k, l) != 0.0) A[i].push_back({static_cast<int>(k), static_cast<int>(l), Adense[i](k, l)});
  }
  C = sym(reduce(C));

  // Keep a maximal linearly independent set of free columns; the rest stay 0.
  std::vector<std::size_t> keep;
  {
    std::vector<Vector> basis;
    double maxn = 0.0;
    for (std::size_t k = 0; k < qall; ++k) maxn = std::max(maxn, numkit::norm(Hall.column(k)));
    for (std::size_t k = 0; k < qall; ++k) {
      Vector col = Hall.column(k);
      for (const auto& e : basis) col = numkit::axpy(col, -numkit::dot(col, e), e);
      const double nr = numkit::norm(col);
      if (nr > 1e-9 * std::max(1.0, maxn)) {
        basis.push_back(numkit::scale(1.0 / nr, col));
        keep.push_back(k);
      }
    }
  }
  const std::size_t q = keep.size();
  Matrix H(m, q);
  Vector cw(q);
  for (std::size_t k = 0; k < q; ++k) {
    for (std::size_t i = 0; i < m; ++i) H(i, k) = Hall(i, keep[k]);
    cw[k] = cw_all[keep[k]];
  }

  auto opA = [&](const Matrix& X) {
    Vector r(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      double s = 0.0;
      for (const auto& e : A[i])
        s += (e.k == e.l ? 1.0 : 2.0) * e.v * X(static_cast<std::size_t>(e.k), static_cast<std::size_t>(e.l));
      r[i] = s;
    }
    return r;
  };
  auto opAt = [&](const Vector& y) {
    Matrix R(n, n);
    for (std::size_t i = 0; i < m; ++i) {
      if (y[i] == 0.0) continue;
      for (const auto& e : A[i]) {
        R(static_cast<std::size_t>(e.k), static_cast<std::size_t>(e.l)) += y[i] * e.v;
        if (e.k != e.l) R(static_cast<std::size_t>(e.l), static_cast<std::size_t>(e.k)) += y[i] * e.v;
      }
    }
    return R;
  };

  // Starting point.
  double maxA = 0.0;
  for (std::size_t i = 0; i < m; ++i) maxA = std::max(maxA, std::sqrt(frob_inner(Adense[i], Adense[i])));
  double xi = std::max(10.0, std::sqrt(static_cast<double>(n)));
  for (std::size_t i = 0; i < m; ++i) xi = std::max(xi, (1.0 + std::abs(b[i])) / (1.0 + std::sqrt(frob_inner(Adense[i], Adense[i]))));
  const double normC = std::sqrt(frob_inner(C, C));
  // Newton steps target C + eps I. Recession directions of the primal optimal
  // set (common in Gram relaxations) then cost eps * trace and the central path
  // stays bounded; residuals and stopping are measured against C itself.
  const double eps = 1e-2 * opt.tol * (1.0 + normC) / static_cast<double>(n);
  Matrix Ceff = C;
  for (std::size_t i = 0; i < n; ++i) Ceff(i, i) += eps;
  const double eta = std::max({10.0, std::sqrt(static_cast<double>(n)), normC, maxA});

  Matrix X = Matrix::identity(n);
  Matrix Z = Matrix::identity(n);
  for (std::size_t i = 0; i < n; ++i) {
    X(i, i) = xi;
    Z(i, i) = eta;
  }
  Vector s(p, xi), u(p, eta), y(m, 0.0), w(q, 0.0);

  const double normb = numkit::norm(b);
  const double normcw = numkit::norm(cw_all);

  SdpSolution sol;
  sol.status = SdpStatus::max_iter;
  double pobj = 0.0, dobj = 0.0, pinf = 0.0, dinf = 0.0;

  Vector Rp, Rl, Rf;
  Matrix Rd;
  auto residuals = [&]() {
    Rp = numkit::sub(b, opA(X));
    for (std::size_t j = 0; j < p; ++j) Rp[slack_row[j]] -= gcoef[j] * s[j];
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t k = 0; k < q; ++k) Rp[i] -= H(i, k) * w[k];
    Rd = lincomb(1.0, Ceff, -1.0, opAt(y));
    Rd = lincomb(1.0, Rd, -1.0, Z);
    Rl.assign(p, 0.0);
    for (std::size_t j = 0; j < p; ++j) Rl[j] = -gcoef[j] * y[slack_row[j]] - u[j];
    Rf = cw;
    for (std::size_t k = 0; k < q; ++k)
      for (std::size_t i = 0; i < m; ++i) Rf[k] -= H(i, k) * y[i];
    pobj = frob_inner(C, X) + numkit::dot(cw, w);
    dobj = numkit::dot(b, y);
    pinf = numkit::norm(Rp) / (1.0 + normb);
    // Dependent free columns are fixed at 0; their reduced costs count too.
    double rf_all = numkit::norm_sq(Rf);
    {
      std::vector<bool> kept(qall, false);
      for (auto k : keep) kept[k] = true;
      for (std::size_t k = 0; k < qall; ++k) {
        if (kept[k]) continue;
        double r = cw_all[k];
        for (std::size_t i = 0; i < m; ++i) r -= Hall(i, k) * y[i];
        rf_all += r * r;
      }
    }
    Matrix Rd0 = Rd;
    for (std::size_t i = 0; i < n; ++i) Rd0(i, i) -= eps;
    dinf = std::sqrt(frob_inner(Rd0, Rd0) + numkit::norm_sq(Rl) + rf_all) / (1.0 + normC + normcw);
  };

  struct Iterate {
    Matrix X, Z;
    Vector s, u, y, w;
  };
  Iterate best{X, Z, s, u, y, w};
  double best_merit = std::numeric_limits<double>::infinity();

  int it = 0;
  for (; it < opt.max_iter; ++it) {
    residuals();
    const double mu = (frob_inner(X, Z) + numkit::dot(s, u)) / static_cast<double>(n + p);
    const double relgap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));
    const double merit = std::max({relgap / opt.tol, pinf / opt.feas_tol, dinf / opt.feas_tol});
    if (merit < best_merit) {
      best_merit = merit;
      best = Iterate{X, Z, s, u, y, w};
    }
    if (merit <= 1.0) {
      sol.status = SdpStatus::optimal;
      break;
    }
    if (dobj > 1e8 * (1.0 + normb) && dinf < 1e-6) {
      sol.status = SdpStatus::infeasible;
      break;
    }
    if (pobj < -1e8 * (1.0 + normC + normcw) && pinf < 1e-6) {
      sol.status = SdpStatus::infeasible;
      break;
    }

    // Nesterov-Todd scaling: G^T Z G = G^{-1} X G^{-T} = diag(dv).
    const auto LX = numkit::cholesky(to_sym(X));
    if (!LX) break;
    const Matrix LtZL = multiply(transpose_multiply(*LX, Z), *LX);
    const auto ed = numkit::eig_sym_full(to_sym(LtZL));
    if (!(ed.values.front() > 0.0)) break;
    Vector dv(n);
    Matrix G = multiply(*LX, ed.vectors);
    for (std::size_t j = 0; j < n; ++j) {
      dv[j] = std::sqrt(ed.values[j]);
      const double f = 1.0 / std::sqrt(dv[j]);
      for (std::size_t i = 0; i < n; ++i) G(i, j) *= f;
    }
    auto scale_in = [&](const Matrix& V) { return multiply(transpose_multiply(G, V), G); };  // G^T V G
    auto scale_out = [&](const Matrix& V) { return multiply(multiply(G, V), G.transpose()); };  // G V G^T

    // Scaled constraint matrices G^T A_i G.
    std::vector<Matrix> At(m, Matrix(n, n));
    for (std::size_t i = 0; i < m; ++i) {
      Matrix& T = At[i];
      for (const auto& e : A[i]) {
        const auto k = static_cast<std::size_t>(e.k), l = static_cast<std::size_t>(e.l);
        for (std::size_t a2 = 0; a2 < n; ++a2) {
          const double gka = G(k, a2), gla = G(l, a2);
          for (std::size_t b2 = 0; b2 < n; ++b2) {
            T(a2, b2) += e.k == e.l ? e.v * gka * G(k, b2) : e.v * (gka * G(l, b2) + gla * G(k, b2));
          }
        }
      }
    }
    Vector D(p);
    for (std::size_t j = 0; j < p; ++j) D[j] = s[j] / u[j];
    SymMatrix M(std::max<std::size_t>(m, 1));
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i; j < m; ++j) M.set(i, j, frob_inner(At[i], At[j]));
    for (std::size_t j = 0; j < p; ++j) M.add_to(slack_row[j], slack_row[j], gcoef[j] * gcoef[j] * D[j]);
    const auto saddle = SaddleSolver::make(M, H);
    if (!saddle) break;

    const Matrix Rdt = scale_in(Rd);

    struct Dir {
      Matrix dX, dZ, dXt, dZt;
      Vector ds, du, dy, dw;
    };
    auto direction = [&](const Matrix& Rct, const Vector& rc) -> std::optional<Dir> {
      const Matrix V = lincomb(1.0, Rct, -1.0, Rdt);
      Vector rhs(m + q, 0.0);
      for (std::size_t i = 0; i < m; ++i) rhs[i] = Rp[i] - frob_inner(At[i], V);
      for (std::size_t j = 0; j < p; ++j) rhs[slack_row[j]] -= gcoef[j] * (rc[j] / u[j] - D[j] * Rl[j]);
      for (std::size_t k = 0; k < q; ++k) rhs[m + k] = Rf[k];
      const auto sol_v = saddle->solve(rhs);
      if (!sol_v) return std::nullopt;
      Dir d;
      d.dy.assign(sol_v->begin(), sol_v->begin() + static_cast<std::ptrdiff_t>(m));
      d.dw.assign(sol_v->begin() + static_cast<std::ptrdiff_t>(m), sol_v->end());
      d.dZ = lincomb(1.0, Rd, -1.0, opAt(d.dy));
      d.dZt = sym(scale_in(d.dZ));
      d.dXt = lincomb(1.0, Rct, -1.0, d.dZt);
      d.dX = sym(scale_out(d.dXt));
      d.du.resize(p);
      d.ds.resize(p);
      for (std::size_t j = 0; j < p; ++j) {
        d.du[j] = Rl[j] - gcoef[j] * d.dy[slack_row[j]];
        d.ds[j] = (rc[j] - s[j] * d.du[j]) / u[j];
      }
      return d;
    };
    // Largest step keeping diag(dv) + alpha * V PSD.
    auto scaled_step = [&](const Matrix& V) {
      SymMatrix S(n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) S.set(i, j, V(i, j) / std::sqrt(dv[i] * dv[j]));
      const double lmin = numkit::min_eigenvalue(S);
      return lmin >= 0.0 ? std::numeric_limits<double>::infinity() : -1.0 / lmin;
    };

    // Predictor.
    Matrix Rct(n, n);
    for (std::size_t i = 0; i < n; ++i) Rct(i, i) = -dv[i];
    Vector rc(p);
    for (std::size_t j = 0; j < p; ++j) rc[j] = -s[j] * u[j];
    const auto pred = direction(Rct, rc);
    if (!pred) break;
    const double ap = std::min(1.0, std::min(scaled_step(pred->dXt), max_lp_step(s, pred->ds)));
    const double ad = std::min(1.0, std::min(scaled_step(pred->dZt), max_lp_step(u, pred->du)));
    double mu_aff = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        mu_aff += ((i == j ? dv[i] : 0.0) + ap * pred->dXt(i, j)) * ((i == j ? dv[i] : 0.0) + ad * pred->dZt(i, j));
    for (std::size_t j = 0; j < p; ++j) mu_aff += (s[j] + ap * pred->ds[j]) * (u[j] + ad * pred->du[j]);
    mu_aff /= static_cast<double>(n + p);
    const double sigma = std::clamp(std::pow(std::max(mu_aff, 0.0) / mu, 3.0), 0.0, 1.0);

    // Corrector.
    const Matrix P = multiply(pred->dXt, pred->dZt);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        Rct(i, j) = ((i == j ? 2.0 * (sigma * mu - dv[i] * dv[i]) : 0.0) - P(i, j) - P(j, i)) / (dv[i] + dv[j]);
    for (std::size_t j = 0; j < p; ++j) rc[j] = sigma * mu - s[j] * u[j] - pred->ds[j] * pred->du[j];
    const auto corr = direction(Rct, rc);
    if (!corr) break;

    const double tau = 0.9 + 0.08 * std::min(ap, ad);
    const double sp = std::min(1.0, tau * std::min(scaled_step(corr->dXt), max_lp_step(s, corr->ds)));
    const double sd = std::min(1.0, tau * std::min(scaled_step(corr->dZt), max_lp_step(u, corr->du)));
    X = sym(lincomb(1.0, X, sp, corr->dX));
    s = numkit::axpy(s, sp, corr->ds);
    w = numkit::axpy(w, sp, corr->dw);
    Z = sym(lincomb(1.0, Z, sd, corr->dZ));
    u = numkit::axpy(u, sd, corr->du);
    y = numkit::axpy(y, sd, corr->dy);
  }
  if (sol.status == SdpStatus::max_iter) {
    X = best.X;
    Z = best.Z;
    s = best.s;
    u = best.u;
    y = best.y;
    w = best.w;
    residuals();
    if (best_merit <= 1.0) sol.status = SdpStatus::optimal;
  }

  sol.iterations = it;
  sol.value = -pobj + 0.0;
  sol.dual_value = -dobj;
  sol.duality_gap = std::abs(pobj - dobj);
  sol.primal_infeasibility = pinf;
  sol.dual_infeasibility = dinf;
  sol.Y = to_sym(multiply(multiply(P, X), P.transpose()));
  sol.free_values.assign(qall, 0.0);
  for (std::size_t k = 0; k < q; ++k) sol.free_values[keep[k]] = w[k];
  sol.multipliers.resize(m);
  for (std::size_t i = 0; i < m; ++i) sol.multipliers[i] = y[i] / rho[i];
  return sol;
}

}  // namespace admmlab
