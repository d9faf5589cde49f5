#include "admmlab/certificates.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "admmlab/errors.hpp"

namespace admmlab {

std::string to_string(CertificateKind k) {
  switch (k) {
    case CertificateKind::E: return "E";
    case CertificateKind::D: return "D";
    case CertificateKind::F: return "F";
  }
  return "?";
}

CertificateKind parse_certificate_kind(const std::string& tag) {
  if (tag == "E") return CertificateKind::E;
  if (tag == "D") return CertificateKind::D;
  if (tag == "F") return CertificateKind::F;
  throw UnsupportedKind("unknown certificate kind: " + tag);
}

namespace {

// 1-based banded entries; T is double or Rational.
template <class T>
std::vector<std::vector<T>> entries(CertificateKind kind, int N, const T& t, const T& c) {
  if (N < 4) throw InvalidInput("certificate: N >= 4 required");
  const int n = kind == CertificateKind::E ? N + 1 : N;
  std::vector<std::vector<T>> M(static_cast<std::size_t>(n), std::vector<T>(static_cast<std::size_t>(n), T(0)));
  auto set = [&](int i, int j, const T& v) {
    M[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)] = v;
    M[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(i - 1)] = v;
  };
  const T Nt(N);
  auto alpha_mid = [&](int k) { return T(2 * (2 * k * k - 3 * k + 1)) * c - T(4 * k - 1) * t; };
  auto beta_mid = [&](int k) { return T(2 * k) * t - T(2 * k * k - k - 1) * c; };

  set(1, 1, T(2) * c);
  set(2, 2, T(6) * c - T(5) * t);
  for (int k = 3; k <= N - 1; ++k) set(k, k, alpha_mid(k));
  set(1, n, t - c);
  set(2, n, -t);

  switch (kind) {
    case CertificateKind::E:
      set(N, N, T(2 * N * (N - 1)) * c - T(2 * N + 1) * t);
      set(N + 1, N + 1, T(2 * N) * c - T(N + 1) * t);
      for (int k = 2; k <= N - 1; ++k) set(k, k + 1, beta_mid(k));
      set(N, N + 1, T(3) * t - T(2 * (N - 1)) * c);
      for (int k = 3; k <= N - 1; ++k) set(k, N + 1, t);
      break;
    case CertificateKind::D: {
      const T corr = T(3 * N - 5) + Nt * Nt / ((Nt - T(1)) * (Nt - T(1)));
      set(N, N, T(2 * N * N - 4 * N + 4) * c - corr * t);
      for (int k = 2; k <= N - 1; ++k) set(k, k + 1, beta_mid(k));
      for (int k = 3; k <= N - 2; ++k) set(k, N, t);
      break;
    }
    case CertificateKind::F: {
      const T corr = Nt + T(1) / ((Nt - T(2)) * (Nt - T(2))) - T(2) / (Nt + T(1)) - T(3);
      set(N, N, T(2 * N * N - 6 * N + 4) * c - T(2) * corr * t);
      for (int k = 2; k <= N - 2; ++k) set(k, k + 1, beta_mid(k));
      set(N - 1, N, (Nt + T(1) / (T(2) - Nt) - T(1)) * t - T(2 * N * N - 6 * N + 3) * c);
      for (int k = 3; k <= N - 2; ++k) set(k, N, t);
      break;
    }
  }
  return M;
}

}  // namespace

CertificateMatrix build_certificate(CertificateKind kind, int N, double t, double c) {
  const auto M = entries<double>(kind, N, t, c);
  CertificateMatrix out;
  out.kind = kind;
  out.N = N;
  out.t = t;
  out.c = c;
  out.matrix = numkit::SymMatrix(M.size());
  for (std::size_t i = 0; i < M.size(); ++i)
    for (std::size_t j = i; j < M.size(); ++j) out.matrix.set(i, j, M[i][j]);
  return out;
}

std::vector<std::vector<Rational>> build_certificate_exact(CertificateKind kind, int N,
                                                           const Rational& t, const Rational& c) {
  return entries<Rational>(kind, N, t, c);
}

SweepResult psd_sweep(CertificateKind kind, int N, double c, int grid_points, unsigned workers) {
  if (N < 4) throw InvalidInput("psd_sweep: N >= 4 required");
  if (!(c > 0.0)) throw InvalidInput("psd_sweep: c > 0 required");
  if (grid_points < 2) throw InvalidInput("psd_sweep: grid_points >= 2 required");

  SweepResult s;
  s.kind = kind;
  s.N = N;
  s.c = c;
  s.checked_conjecture = kind == CertificateKind::F;
  const auto G = static_cast<std::size_t>(grid_points);
  s.grid.resize(G);
  for (std::size_t i = 0; i < G; ++i)
    s.grid[i] = i + 1 == G ? c : c * static_cast<double>(i) / static_cast<double>(G - 1);
  s.reports.resize(G);

  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(G));
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i)
      s.reports[i] = numkit::psd_check(build_certificate(kind, N, s.grid[i], c).matrix);
  };
  if (workers <= 1) {
    work(0, G);
  } else {
    std::vector<std::future<void>> jobs;
    const std::size_t chunk = (G + workers - 1) / workers;
    for (std::size_t b = 0; b < G; b += chunk) jobs.push_back(std::async(std::launch::async, work, b, std::min(G, b + chunk)));
    for (auto& j : jobs) j.get();
  }

  s.pass = std::all_of(s.reports.begin(), s.reports.end(), [](const auto& r) { return r.is_psd; });
  s.endpoints_pass = s.reports.front().is_psd && s.reports.back().is_psd;
  s.upper_endpoint_definite = numkit::cholesky(build_certificate(kind, N, c, c).matrix).has_value();
  return s;
}

std::string sweep_to_json(const SweepResult& s) {
  nlohmann::json j;
  j["kind"] = to_string(s.kind);
  j["N"] = s.N;
  j["c"] = s.c;
  j["grid"] = s.grid;
  std::vector<double> mins;
  for (const auto& r : s.reports) mins.push_back(r.min_eigenvalue);
  j["min_eig_per_t"] = mins;
  j["pass"] = s.pass;
  j["endpoints_pass"] = s.endpoints_pass;
  j["status"] = s.checked_conjecture ? "checked conjecture" : "proven claim checked";
  return j.dump(2);
}

std::string sweep_to_csv(const SweepResult& s) {
  std::ostringstream out;
  out << "t,min_eigenvalue,tolerance,is_psd\n";
  for (std::size_t i = 0; i < s.grid.size(); ++i)
    out << format_number(s.grid[i]) << ',' << format_number(s.reports[i].min_eigenvalue) << ','
        << format_number(s.reports[i].tolerance_used) << ',' << (s.reports[i].is_psd ? 1 : 0) << '\n';
  return out.str();
}

// ------------------------------------------------------------ row reduction

RowReduction row_reduction_diagonal(CertificateKind kind, int N) {
  if (kind == CertificateKind::F) throw UnsupportedKind("row_reduction_diagonal: F has no row reduction");
  if (kind == CertificateKind::E && N < 4) throw InvalidInput("row_reduction_diagonal: E needs N >= 4");
  if (kind == CertificateKind::D && N < 5) throw InvalidInput("row_reduction_diagonal: D needs N >= 5");

  auto K = entries<Rational>(kind, N, Rational(1), Rational(1));
  const int n = static_cast<int>(K.size());
  // add s * row(from) to row(to), 1-based
  auto add_row = [&](int from, int to, const Rational& s) {
    auto& dst = K[static_cast<std::size_t>(to - 1)];
    const auto& src = K[static_cast<std::size_t>(from - 1)];
    for (int j = 0; j < n; ++j) dst[static_cast<std::size_t>(j)] += s * src[static_cast<std::size_t>(j)];
  };

  add_row(2, 3, 1);
  add_row(2, n, 1);
  add_row(3, 4, 1);
  const int last_i = kind == CertificateKind::E ? N - 1 : N - 2;
  for (int i = 4; i <= last_i; ++i) {
    add_row(i, i + 1, 1);
    add_row(i, n, Rational(3 - i, 2 * i * i - 3 * i - 1));
  }
  if (kind == CertificateKind::E)
    add_row(N, N + 1, Rational(N - 1, 3 * N - 5));
  else
    add_row(N - 1, N, Rational(2 * N * N - 8 * N + 9, 2 * N * N - 7 * N + 4));

  RowReduction r;
  r.kind = kind;
  r.N = N;
  r.upper_triangular = true;
  for (int i = 0; i < n; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    r.exact.push_back(K[ui][ui]);
    r.diagonal.push_back(static_cast<double>(K[ui][ui]));
    for (int j = 0; j < i; ++j)
      if (K[ui][static_cast<std::size_t>(j)] != 0) r.upper_triangular = false;
  }
  return r;
}

std::vector<Rational> closed_form_row_reduction(CertificateKind kind, int N) {
  if (kind == CertificateKind::F) throw UnsupportedKind("closed_form_row_reduction: F has no row reduction");
  std::vector<Rational> J{Rational(2)};
  for (int k = 2; k <= N - 1; ++k) J.emplace_back(2 * k * k - 3 * k - 1);
  auto tail_sum = [](int upto) {
    Rational s = 0;
    for (int i = 4; i <= upto; ++i) s += Rational((i - 3) * (i - 3), 2 * i * i - 3 * i - 1);
    return s;
  };
  if (kind == CertificateKind::E) {
    J.emplace_back(3 * N - 5);
    J.push_back(Rational(N - 2) - Rational((N - 1) * (N - 1), 3 * N - 5) - tail_sum(N - 1));
  } else {
    const Rational Nr(N);
    const Rational q(2 * N * N - 8 * N + 9);
    J.push_back(Rational(2 * N * N - 7 * N + 8) - Nr * Nr / ((Nr - 1) * (Nr - 1)) -
                q * q / Rational(2 * N * N - 7 * N + 4) - tail_sum(N - 2));
  }
  return J;
}

// ------------------------------------------------------- master inequality

MasterInequality master_inequality_check(const SeparableProblem& p, const AdmmTrace& trace,
                                         const OptimalPair& opt, std::span<const double> v,
                                         double c1) {
  using numkit::dot;
  using numkit::norm_sq;
  using numkit::sub;
  const int N = trace.N;
  if (N < 4) throw InvalidInput("master_inequality_check: N >= 4 required");
  if (v.size() != p.r()) throw InvalidInput("master_inequality_check: v has wrong length");
  if (opt.x_star.size() != p.n() || opt.z_star.size() != p.m() || opt.lambda_star.size() != p.r())
    throw InvalidInput("master_inequality_check: optimal pair has wrong dimensions");
  const Vector feas = sub(numkit::add(p.A.apply(opt.x_star), p.B.apply(opt.z_star)), p.b);
  if (numkit::norm(feas) > 1e-10)
    throw InvalidInput("master_inequality_check: A x* + B z* != b, instance is not translated");

  const double t = trace.t;
  const double Nd = N;
  auto a = [&](int k) { return p.A.apply(sub(trace.x(k), opt.x_star)); };
  auto bz = [&](int k) { return p.B.apply(sub(trace.z(k), opt.z_star)); };
  auto lam = [&](int k) -> const Vector& { return trace.lambda(k); };
  auto lin = [](const Vector& u, double s1, const Vector& w, double s2, const Vector& y) {
    Vector o(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) o[i] = u[i] + s1 * w[i] + s2 * y[i];
    return o;
  };
  const Vector vv(v.begin(), v.end());

  std::vector<double> terms;
  const Vector aN = a(N), bN = bz(N), bN1 = bz(N - 1), a1 = a(1), a2 = a(2), b0 = bz(0);

  terms.push_back(Nd * dot(lam(N), numkit::add(aN, bN)));
  terms.push_back(-dot(lin(lam(N), t, aN, t, bN1), sub(aN, vv)));
  terms.push_back(dot(lin(lam(0), t, a1, t, b0), sub(a1, vv)));
  terms.push_back(norm_sq(sub(lam(0), opt.lambda_star)) / (2.0 * t));
  terms.push_back(-norm_sq(sub(lam(N), opt.lambda_star)) / (2.0 * t));
  terms.push_back(0.5 * t * norm_sq(b0));
  {
    Vector w = sub(a1, a2);
    w = numkit::axpy(w, Nd + 1.0, aN);
    w = numkit::add(w, bN);
    terms.push_back(-t * dot(w, vv));
  }
  {
    double s = 0.0;
    for (int k = 3; k <= N; ++k) s += dot(a(k), vv);
    terms.push_back(-t * s);
  }
  terms.push_back(0.5 * t * (Nd - 1.0) * norm_sq(vv));
  terms.push_back(-0.5 * c1 * norm_sq(a1));
  {
    double s = 0.0;
    for (int k = 2; k <= N; ++k) {
      const double kd = k;
      const double alpha = k <= N - 1 ? (4.0 * kd - 1.0) * t - 2.0 * (2.0 * kd * kd - 3.0 * kd + 1.0) * c1
                                      : (4.0 * Nd + 1.0) * t - (2.0 * Nd * Nd - 5.0 * Nd + 3.0) * c1;
      s += 0.5 * alpha * norm_sq(a(k));
    }
    terms.push_back(s);
  }
  {
    double s = 0.0;
    for (int k = 2; k <= N - 1; ++k) {
      const double kd = k;
      const double beta = (2.0 * kd * kd - kd - 1.0) * c1 - 2.0 * kd * t;
      s += beta * dot(a(k), a(k + 1));
    }
    terms.push_back(s);
  }
  terms.push_back(t * Nd * dot(bN1, sub(aN, vv)));
  terms.push_back(t * dot(aN, bN));
  terms.push_back(-0.5 * t * (Nd - 1.0) * (Nd - 1.0) * norm_sq(sub(bN, bN1)));
  terms.push_back(-0.5 * t * Nd * Nd * norm_sq(numkit::add(aN, bN)));
  terms.push_back(-t * norm_sq(a2));
  {
    const double f1 = side_value(p.f, trace.x(1));
    const double fN = side_value(p.f, trace.x(N));
    const double gN = side_value(p.g, trace.z(N));
    terms.push_back(f1 - fN + Nd * (fN - opt.f_star + gN - opt.g_star));
  }

  MasterInequality out;
  for (double x : terms) {
    out.lhs += x;
    out.scale += std::abs(x);
  }
  return out;
}

}  // namespace admmlab
