#include "admmlab/admm.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "admmlab/errors.hpp"

namespace admmlab {

using numkit::add;
using numkit::axpy;
using numkit::norm;
using numkit::sub;

const Vector& AdmmTrace::x(int k) const {
  if (k < 1 || k > N) throw InvalidInput("AdmmTrace::x: k out of range");
  return xs[static_cast<std::size_t>(k - 1)];
}

const Vector& AdmmTrace::z(int k) const {
  if (k < 0 || k > N) throw InvalidInput("AdmmTrace::z: k out of range");
  return zs[static_cast<std::size_t>(k)];
}

const Vector& AdmmTrace::lambda(int k) const {
  if (k < 0 || k > N) throw InvalidInput("AdmmTrace::lambda: k out of range");
  return lambdas[static_cast<std::size_t>(k)];
}

namespace {

Matrix scaled_gram(const Matrix& A, double t) {
  Matrix Q = numkit::transpose_multiply(A, A);
  for (std::size_t i = 0; i < Q.rows(); ++i)
    for (std::size_t j = 0; j < Q.cols(); ++j) Q(i, j) *= t;
  return Q;
}

Vector constraint_residual(const SeparableProblem& p, const Vector& x, const Vector& z) {
  return sub(add(p.A.apply(x), p.B.apply(z)), p.b);
}

}  // namespace

DualValue dual_value(const SeparableProblem& p, std::span<const double> lambda) {
  if (lambda.size() != p.r()) throw InvalidInput("dual_value: lambda has wrong length");
  DualValue out;
  try {
    out.x_hat = side_argmin(p.f, p.A.apply_transpose(lambda), Matrix(p.n(), p.n()));
    out.z_hat = side_argmin(p.g, p.B.apply_transpose(lambda), Matrix(p.m(), p.m()));
  } catch (const Unbounded&) {
    out.bounded = false;
    return out;
  }
  const Vector r = constraint_residual(p, out.x_hat, out.z_hat);
  out.value = side_value(p.f, out.x_hat) + side_value(p.g, out.z_hat) + numkit::dot(lambda, r);
  out.xi = numkit::scale(-1.0, r);
  out.bounded = std::isfinite(out.value);
  return out;
}

AdmmTrace admm_run(const SeparableProblem& p, const AdmmConfig& cfg) {
  p.validate();
  if (!(cfg.t > 0.0) || !std::isfinite(cfg.t)) throw InvalidInput("admm_run: t must be > 0");
  if (cfg.N < 1) throw InvalidInput("admm_run: N must be >= 1");
  if (cfg.lambda0.size() != p.r()) throw InvalidInput("admm_run: lambda0 has wrong length");
  if (cfg.z0.size() != p.m()) throw InvalidInput("admm_run: z0 has wrong length");

  const double t = cfg.t;
  const Matrix Qx = scaled_gram(p.A, t);
  const Matrix Qz = scaled_gram(p.B, t);

  AdmmTrace tr;
  tr.t = t;
  tr.N = cfg.N;
  tr.zs.push_back(cfg.z0);
  tr.lambdas.push_back(cfg.lambda0);

  for (int k = 1; k <= cfg.N; ++k) {
    const Vector& lam = tr.lambdas.back();
    const Vector& zprev = tr.zs.back();
    try {
      // x-update: lin = A^T(lambda + t(Bz - b))
      const Vector sx = axpy(lam, t, sub(p.B.apply(zprev), p.b));
      Vector x = side_argmin(p.f, p.A.apply_transpose(sx), Qx);
      // z-update: lin = B^T(lambda + t(Ax - b))
      const Vector sz = axpy(lam, t, sub(p.A.apply(x), p.b));
      Vector z = side_argmin(p.g, p.B.apply_transpose(sz), Qz);
      const Vector r = constraint_residual(p, x, z);
      Vector lam_next = axpy(lam, t, r);

      tr.primal_residuals.push_back(norm(r));
      tr.dual_residuals.push_back(p.A.apply_transpose(p.B.apply(sub(zprev, z))));
      tr.xs.push_back(std::move(x));
      tr.zs.push_back(std::move(z));
      tr.lambdas.push_back(std::move(lam_next));
    } catch (const Unbounded& e) {
      throw Unbounded(std::string(e.what()) + " at iteration " + std::to_string(k), k);
    }
  }
  for (const auto& lam : tr.lambdas) {
    const DualValue d = dual_value(p, lam);
    tr.dual_values.push_back(d.bounded ? std::optional<double>(d.value) : std::nullopt);
  }
  return tr;
}

Residuals residuals(const SeparableProblem& p, const AdmmTrace& trace, int k) {
  if (k < 1 || k > trace.N) throw InvalidInput("residuals: k must satisfy 1 <= k <= N");
  Residuals out;
  out.primal = norm(constraint_residual(p, trace.x(k), trace.z(k)));
  out.dual = p.A.apply_transpose(p.B.apply(sub(trace.z(k - 1), trace.z(k))));
  return out;
}

std::vector<double> lyapunov_sequence(const SeparableProblem& p, const AdmmTrace& trace,
                                      const OptimalPair& opt) {
  if (opt.lambda_star.size() != p.r() || opt.z_star.size() != p.m())
    throw InvalidInput("lyapunov_sequence: optimal pair has wrong dimensions");
  std::vector<double> v;
  for (int k = 0; k <= trace.N; ++k) {
    const double dl = numkit::norm_sq(sub(trace.lambda(k), opt.lambda_star));
    const double dz = numkit::norm_sq(p.B.apply(sub(trace.z(k), opt.z_star)));
    v.push_back(dl + trace.t * trace.t * dz);
  }
  return v;
}

double optimality_inclusion_violation(const SeparableProblem& p, const AdmmTrace& trace) {
  double worst = 0.0;
  const auto* fs = side_plq(p.f);
  const auto* gs = side_plq(p.g);
  for (int k = 1; k <= trace.N; ++k) {
    if (fs) {
      const Vector w = axpy(trace.lambda(k), trace.t, p.B.apply(sub(trace.z(k - 1), trace.z(k))));
      const Vector u = p.A.apply_transpose(w);
      for (std::size_t i = 0; i < fs->size(); ++i)
        worst = std::max(worst, (*fs)[i].subdiff(trace.x(k)[i]).distance(-u[i]));
    }
    if (gs) {
      const Vector u = p.B.apply_transpose(trace.lambda(k));
      for (std::size_t i = 0; i < gs->size(); ++i)
        worst = std::max(worst, (*gs)[i].subdiff(trace.z(k)[i]).distance(-u[i]));
    }
  }
  return worst;
}

double multiplier_recursion_error(const SeparableProblem& p, const AdmmTrace& trace) {
  double worst = 0.0;
  for (int k = 1; k <= trace.N; ++k) {
    const Vector expect = axpy(trace.lambda(k - 1), trace.t, constraint_residual(p, trace.x(k), trace.z(k)));
    for (std::size_t i = 0; i < expect.size(); ++i)
      worst = std::max(worst, std::abs(trace.lambda(k)[i] - expect[i]));
  }
  return worst;
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string join(const Vector& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ';';
    s += format_number(v[i]);
  }
  return s;
}

}  // namespace

std::string trace_to_csv(const SeparableProblem& p, const AdmmTrace& trace,
                         const std::optional<OptimalPair>& opt) {
  std::vector<double> lyap;
  if (opt) lyap = lyapunov_sequence(p, trace, *opt);
  std::ostringstream out;
  out << "k,x,z,lambda,primal_residual,dual_residual_norm,dual_value,lyapunov\n";
  for (int k = 0; k <= trace.N; ++k) {
    out << k << ',';
    if (k >= 1) out << join(trace.x(k));
    out << ',' << join(trace.z(k)) << ',' << join(trace.lambda(k)) << ',';
    if (k >= 1) out << format_number(trace.primal_residuals[k - 1]);
    out << ',';
    if (k >= 1) out << format_number(norm(trace.dual_residuals[k - 1]));
    out << ',';
    const auto& d = trace.dual_values[static_cast<std::size_t>(k)];
    out << (d ? format_number(*d) : std::string("unbounded")) << ',';
    if (opt) out << format_number(lyap[static_cast<std::size_t>(k)]);
    out << '\n';
  }
  return out.str();
}

}  // namespace admmlab
