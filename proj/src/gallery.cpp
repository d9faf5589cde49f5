#include "admmlab/gallery.hpp"

#include <cmath>

#include "admmlab/errors.hpp"

namespace admmlab {

std::string to_string(GalleryKind k) {
  switch (k) {
    case GalleryKind::dual_gap_tight: return "dual_gap_tight";
    case GalleryKind::primal_residual_tight: return "primal_residual_tight";
    case GalleryKind::dual_residual_tight: return "dual_residual_tight";
    case GalleryKind::pl_l1_quadratic: return "pl_l1_quadratic";
  }
  return "unknown";
}

GalleryKind parse_gallery_kind(const std::string& tag) {
  for (auto k : {GalleryKind::dual_gap_tight, GalleryKind::primal_residual_tight,
                 GalleryKind::dual_residual_tight, GalleryKind::pl_l1_quadratic})
    if (to_string(k) == tag) return k;
  throw UnsupportedKind("unknown gallery kind: " + tag);
}

namespace {

void check_tight(int N, double t, double c1) {
  if (N < 4) throw InvalidInput("gallery: N >= 4 required");
  if (!(t > 0.0)) throw InvalidInput("gallery: t > 0 required");
  if (!(t <= c1)) throw InvalidInput("gallery: t <= c1 required");
}

Matrix scalar(double v) { return Matrix(1, 1, v); }

}  // namespace

GalleryInstance make_instance(GalleryKind kind, int N, double t, double c1, int n) {
  GalleryInstance g;
  const double Nd = N;
  if (kind == GalleryKind::pl_l1_quadratic) {
    if (n < 1) throw InvalidInput("gallery: n >= 1 required");
    if (!(t > 0.0)) throw InvalidInput("gallery: t > 0 required");
    if (N < 1) throw InvalidInput("gallery: N >= 1 required");
    const auto un = static_cast<std::size_t>(n);
    std::vector<PlqFunction> fs(un, PlqFunction::abs(1.0, 1.0));
    g.problem.f = fs;
    g.problem.g = fs;
    g.problem.A = Matrix::identity(un);
    g.problem.B = Matrix::identity(un);
    g.problem.b = Vector(un, 0.0);
    g.config = {t, N, Vector(un, 2.0), Vector(un, 0.0)};
    g.optimal = {Vector(un, 0.0), Vector(un, 0.0), Vector(un, 0.0), 0.0, 0.0};
    return g;
  }

  check_tight(N, t, c1);
  std::vector<AffinePiece> fp{{0.5, 0.0}, {-0.5, 0.0}};
  std::vector<AffinePiece> gp;
  switch (kind) {
    case GalleryKind::dual_gap_tight: {
      const double a = 1.0 / (2.0 * Nd * t);
      gp = {{(Nd - 1.0) / (2.0 * Nd), -a * (2.0 * Nd - 1.0) / (2.0 * Nd)}, {-0.5, 0.0}};
      break;
    }
    case GalleryKind::primal_residual_tight: {
      const double s = 0.5 - 1.0 / Nd;
      gp = {{s, -s / (Nd * t)}, {-0.5, 1.0 / (2.0 * Nd * t)}};
      break;
    }
    case GalleryKind::dual_residual_tight: {
      fp = {{-(Nd + 1.0) / (2.0 * (Nd - 1.0)), 0.0}, {0.5, 0.0}};
      const double s = (Nd - 3.0) / (2.0 * (Nd - 1.0));
      gp = {{-0.5, 1.0 / (2.0 * t * (Nd - 1.0))}, {s, -s / (t * (Nd - 1.0))}};
      break;
    }
    case GalleryKind::pl_l1_quadratic: break;
  }
  g.problem.f = std::vector<PlqFunction>{PlqFunction(c1, fp)};
  g.problem.g = std::vector<PlqFunction>{PlqFunction(0.0, gp)};
  g.problem.A = scalar(1.0);
  g.problem.B = scalar(1.0);
  g.problem.b = {0.0};
  g.config = {t, N, {-0.5}, {0.0}};
  g.optimal = {{0.0}, {0.0}, {0.5}, side_value(g.problem.f, Vector{0.0}),
               side_value(g.problem.g, Vector{0.0})};
  return g;
}

ExpectedTrace expected_trace(GalleryKind kind, int N, double t) {
  if (kind == GalleryKind::pl_l1_quadratic)
    throw UnsupportedKind("expected_trace: no closed-form trace for pl_l1_quadratic");
  if (N < 4) throw InvalidInput("expected_trace: N >= 4 required");
  if (!(t > 0.0)) throw InvalidInput("expected_trace: t > 0 required");
  const double Nd = N;
  ExpectedTrace e;
  e.xs.assign(static_cast<std::size_t>(N), 0.0);
  e.zs.push_back(0.0);
  e.lambdas.push_back(-0.5);
  for (int k = 1; k <= N; ++k) {
    switch (kind) {
      case GalleryKind::dual_gap_tight:
        e.zs.push_back(1.0 / (2.0 * Nd * t));
        e.lambdas.push_back(-0.5 + k / (2.0 * Nd));
        break;
      case GalleryKind::primal_residual_tight:
        e.zs.push_back(1.0 / (Nd * t));
        e.lambdas.push_back((2.0 * k - Nd) / (2.0 * Nd));
        break;
      case GalleryKind::dual_residual_tight:
        e.zs.push_back(k < N ? 1.0 / (t * (Nd - 1.0)) : 0.0);
        e.lambdas.push_back(k < N ? (2.0 * k + 1.0 - Nd) / (2.0 * (Nd - 1.0)) : 0.5);
        break;
      case GalleryKind::pl_l1_quadratic: break;
    }
  }
  switch (kind) {
    case GalleryKind::dual_gap_tight: e.target = 1.0 / (4.0 * Nd * t); break;
    case GalleryKind::primal_residual_tight: e.target = 1.0 / (t * Nd); break;
    case GalleryKind::dual_residual_tight: e.target = 1.0 / ((Nd - 1.0) * t); break;
    case GalleryKind::pl_l1_quadratic: break;
  }
  return e;
}

double pl_dual_closed_form(std::span<const double> lambda) {
  double s = 0.0;
  for (double l : lambda) {
    if (l > 1.0) s -= (l - 1.0) * (l - 1.0);
    else if (l < -1.0) s -= (l + 1.0) * (l + 1.0);
  }
  return s;
}

double measured_metric(GalleryKind kind, const GalleryInstance& inst, const AdmmTrace& trace) {
  const auto& p = inst.problem;
  const int N = trace.N;
  switch (kind) {
    case GalleryKind::primal_residual_tight: return residuals(p, trace, N).primal;
    case GalleryKind::dual_residual_tight:
      return numkit::norm(p.B.apply(numkit::sub(trace.z(N), trace.z(N - 1))));
    default: {
      const DualValue d = dual_value(p, trace.lambda(N));
      if (!d.bounded) throw InvalidInput("measured_metric: D(lambda^N) is unbounded");
      return inst.optimal.f_star + inst.optimal.g_star - d.value;
    }
  }
}

}  // namespace admmlab
