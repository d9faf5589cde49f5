#include "admmlab/pep.hpp"

#include <cmath>

#include <json.hpp>

#include "admmlab/errors.hpp"

namespace admmlab {

std::string to_string(PepObjective o) {
  switch (o) {
    case PepObjective::dual_gap: return "dual_gap";
    case PepObjective::primal_residual_sq: return "primal_residual_sq";
    case PepObjective::dual_residual_sq: return "dual_residual_sq";
  }
  return "?";
}

PepObjective parse_pep_objective(const std::string& tag) {
  for (auto o : {PepObjective::dual_gap, PepObjective::primal_residual_sq, PepObjective::dual_residual_sq})
    if (to_string(o) == tag) return o;
  throw UnsupportedKind("unknown PEP objective: " + tag);
}

std::vector<InterpolationTemplate> interpolation_block(int point_count, double modulus) {
  if (point_count < 2) throw InvalidInput("interpolation_block: at least 2 points required");
  if (!(modulus >= 0.0)) throw InvalidInput("interpolation_block: modulus must be >= 0");
  std::vector<InterpolationTemplate> out;
  for (int i = 0; i < point_count; ++i)
    for (int j = 0; j < point_count; ++j)
      if (i != j) out.push_back({i, j, modulus});
  return out;
}

void emit_interpolation(SdpProblem& sdp, const std::vector<InterpolationPoint>& pts,
                        const std::vector<InterpolationTemplate>& block, const std::string& tag) {
  for (const auto& tpl : block) {
    const auto& pi = pts.at(static_cast<std::size_t>(tpl.i));
    const auto& pj = pts.at(static_cast<std::size_t>(tpl.j));
    const Vector d = numkit::sub(pi.point, pj.point);
    SdpConstraint c;
    c.lhs.add_inner(d, d, 0.5 * tpl.modulus);
    c.lhs.add_inner(pj.u, d, -1.0);
    c.lhs.add_free(pi.value_index, -1.0);
    c.lhs.add_free(pj.value_index, 1.0);
    c.lhs.prune();
    c.relation = Relation::LessEqual;
    c.rhs = 0.0;
    c.label = tag + "[" + pi.name + "," + pj.name + "]";
    sdp.constraints.push_back(std::move(c));
  }
}

namespace {

Vector unit(std::size_t dim, std::size_t i) {
  Vector e(dim, 0.0);
  e[i] = 1.0;
  return e;
}

Vector comb(const Vector& a, double s, const Vector& b) { return numkit::axpy(a, s, b); }

}  // namespace

SdpProblem build_pep(const PepParams& prm) {
  if (prm.N < 1) throw InvalidInput("build_pep: N >= 1 required");
  if (!(prm.t > 0.0)) throw InvalidInput("build_pep: t > 0 required");
  if (!(prm.c1 >= 0.0) || !(prm.c2 >= 0.0)) throw InvalidInput("build_pep: c1, c2 >= 0 required");
  if (!(prm.Delta >= 0.0)) throw InvalidInput("build_pep: Delta >= 0 required");

  const int N = prm.N;
  const double t = prm.t;
  const auto dim = static_cast<std::size_t>(2 * N + 6);
  auto Ax = [&](int k) { return unit(dim, static_cast<std::size_t>(k)); };  // k = 1..N+1
  auto Bz = [&](int k) { return unit(dim, static_cast<std::size_t>(N + 4 + k)); };  // k = 0..N
  const Vector Ax_dag = unit(dim, 0), Ax_bar = unit(dim, static_cast<std::size_t>(N + 2));
  const Vector Bz_dag = unit(dim, static_cast<std::size_t>(N + 3)), Bz_bar = unit(dim, dim - 1);

  std::vector<Vector> lam{numkit::add(Ax_dag, Bz_dag)};
  for (int k = 1; k <= N; ++k) lam.push_back(comb(comb(lam.back(), t, Ax(k)), t, Bz(k)));
  const Vector lam_star = numkit::add(Ax_bar, Bz_bar);

  SdpProblem sdp;
  sdp.gram_dim = static_cast<int>(dim);
  sdp.gram_names.push_back("Ax_dag");
  for (int k = 1; k <= N + 1; ++k) sdp.gram_names.push_back("Ax" + std::to_string(k));
  sdp.gram_names.push_back("Ax_bar");
  sdp.gram_names.push_back("Bz_dag");
  for (int k = 0; k <= N; ++k) sdp.gram_names.push_back("Bz" + std::to_string(k));
  sdp.gram_names.push_back("Bz_bar");

  const int f_star = N + 1;
  const int g_base = N + 2;  // g^k at g_base + k - 1
  const int g_star = 2 * N + 2;
  sdp.num_free = 2 * N + 3;
  for (int k = 1; k <= N + 1; ++k) sdp.free_names.push_back("f" + std::to_string(k));
  sdp.free_names.push_back("f_star");
  for (int k = 1; k <= N; ++k) sdp.free_names.push_back("g" + std::to_string(k));
  sdp.free_names.push_back("g_star");

  std::vector<InterpolationPoint> fpts;
  for (int k = 1; k <= N; ++k)
    fpts.push_back({Ax(k), comb(comb(lam[static_cast<std::size_t>(k - 1)], t, Ax(k)), t, Bz(k - 1)), k - 1,
                    "x" + std::to_string(k)});
  fpts.push_back({Ax(N + 1), lam[static_cast<std::size_t>(N)], N, "x" + std::to_string(N + 1)});
  fpts.push_back({Vector(dim, 0.0), lam_star, f_star, "x_star"});

  std::vector<InterpolationPoint> gpts;
  for (int k = 1; k <= N; ++k)
    gpts.push_back({Bz(k), lam[static_cast<std::size_t>(k)], g_base + k - 1, "z" + std::to_string(k)});
  gpts.push_back({Vector(dim, 0.0), lam_star, g_star, "z_star"});

  emit_interpolation(sdp, fpts, interpolation_block(static_cast<int>(fpts.size()), prm.c1), "f");
  emit_interpolation(sdp, gpts, interpolation_block(static_cast<int>(gpts.size()), prm.c2), "g");

  SdpConstraint init;
  const Vector d0 = numkit::sub(lam[0], lam_star);
  init.lhs.add_inner(d0, d0, 1.0);
  init.lhs.add_inner(Bz(0), Bz(0), t * t);
  init.lhs.prune();
  init.relation = Relation::Equal;
  init.rhs = prm.Delta;
  init.label = "initial_distance";
  sdp.constraints.push_back(std::move(init));

  auto& obj = sdp.objective;
  switch (prm.objective) {
    case PepObjective::dual_gap:
      obj.add_free(f_star, 1.0);
      obj.add_free(g_star, 1.0);
      obj.add_free(N, -1.0);
      obj.add_free(g_base + N - 1, -1.0);
      obj.add_inner(lam[static_cast<std::size_t>(N)], numkit::add(Ax(N + 1), Bz(N)), -1.0);
      break;
    case PepObjective::primal_residual_sq: {
      const Vector r = numkit::add(Ax(N), Bz(N));
      obj.add_inner(r, r, 1.0);
      break;
    }
    case PepObjective::dual_residual_sq: {
      const Vector r = numkit::sub(Bz(N), Bz(N - 1));
      obj.add_inner(r, r, 1.0);
      break;
    }
  }
  obj.prune();
  return sdp;
}

SdpProblem build_rate_pep(const RatePepParams& prm, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidInput("build_rate_pep: alpha must lie in (0, 1)");
  if (!(prm.t > 0.0 && prm.c1 > 0.0 && prm.c2 > 0.0 && prm.Lp > 0.0))
    throw InvalidInput("build_rate_pep: t, c1, c2, Lp > 0 required");
  const double t = prm.t;
  constexpr std::size_t dim = 9;
  enum : std::size_t { Ax_dag, Bz_dag, Axh1, Bz1, Ax2, Bz2, Axh2, Ax_bar, Bz_bar };
  auto e = [](std::size_t i) { return unit(dim, i); };

  const Vector lam1 = numkit::add(e(Ax_dag), e(Bz_dag));
  const Vector lam2 = comb(comb(lam1, t, e(Ax2)), t, e(Bz2));
  const Vector lam_star = numkit::add(e(Ax_bar), e(Bz_bar));

  SdpProblem sdp;
  sdp.gram_dim = static_cast<int>(dim);
  sdp.gram_names = {"Ax_dag", "Bz_dag", "Ax_hat1", "Bz1", "Ax2", "Bz2", "Ax_hat2", "Ax_bar", "Bz_bar"};
  // f values: x_hat1, x2, x_hat2, star; g values: z1, z2, star
  sdp.num_free = 7;
  sdp.free_names = {"f_hat1", "f2", "f_hat2", "f_star", "g1", "g2", "g_star"};

  std::vector<InterpolationPoint> fpts{
      {e(Axh1), lam1, 0, "x_hat1"},
      {e(Ax2), comb(comb(lam1, t, e(Ax2)), t, e(Bz1)), 1, "x2"},
      {e(Axh2), lam2, 2, "x_hat2"},
      {Vector(dim, 0.0), lam_star, 3, "x_star"}};
  std::vector<InterpolationPoint> gpts{
      {e(Bz1), lam1, 4, "z1"}, {e(Bz2), lam2, 5, "z2"}, {Vector(dim, 0.0), lam_star, 6, "z_star"}};
  emit_interpolation(sdp, fpts, interpolation_block(4, prm.c1), "f");
  emit_interpolation(sdp, gpts, interpolation_block(3, prm.c2), "g");

  auto gap = [&](int fi, int gi, const Vector& lam, std::size_t ax, std::size_t bz) {
    LinearFunctional g;
    g.add_free(3, 1.0);
    g.add_free(6, 1.0);
    g.add_free(fi, -1.0);
    g.add_free(gi, -1.0);
    g.add_inner(lam, numkit::add(e(ax), e(bz)), -1.0);
    return g;
  };
  const LinearFunctional den = gap(0, 4, lam1, Axh1, Bz1);
  const LinearFunctional num = gap(2, 5, lam2, Axh2, Bz2);

  SdpConstraint norm1{den, Relation::Equal, 1.0, "denominator"};
  norm1.lhs.prune();
  sdp.constraints.push_back(norm1);

  auto pl = [&](const LinearFunctional& g, std::size_t ax, std::size_t bz, const std::string& label) {
    SdpConstraint c{g, Relation::LessEqual, 0.0, label};
    const Vector r = numkit::add(e(ax), e(bz));
    c.lhs.add_inner(r, r, -1.0 / (2.0 * prm.Lp));
    c.lhs.prune();
    sdp.constraints.push_back(std::move(c));
  };
  pl(den, Axh1, Bz1, "pl_lambda1");
  pl(num, Axh2, Bz2, "pl_lambda2");

  sdp.objective = num;
  sdp.objective.prune();
  sdp.threshold = alpha;
  return sdp;
}

RatePepResult solve_rate_pep(const RatePepParams& params, double alpha, const SdpOptions& opt) {
  const SdpProblem sdp = build_rate_pep(params, alpha);
  const SdpSolution s = sdp_solve(sdp, opt);
  RatePepResult r;
  r.relaxation_optimum = s.value;
  r.alpha = alpha;
  r.exceeds_alpha = s.value > alpha;
  r.status = s.status;
  return r;
}

double conjectured_dual_gap(int N, double t, double c1, double c2, double Delta) {
  return Delta / (4.0 * N * t + 2.0 * c1 * c2 / (c1 + c2));
}

double conjectured_primal_residual(int N, double t, double c1, double c2, double Delta) {
  return std::sqrt(Delta) / (N * t + c1 * c2 / (c1 + c2));
}

ConjectureReport check_conjecture(int N, double t, double c1, double c2, double Delta,
                                  const SdpOptions& opt) {
  if (!(c1 > 0.0 && c2 > 0.0)) throw InvalidInput("check_conjecture: c1, c2 > 0 required");
  if (!(t > 0.0 && t <= c1)) throw InvalidInput("check_conjecture: 0 < t <= c1 required");
  if (N < 4) throw InvalidInput("check_conjecture: N >= 4 required");
  ConjectureReport r;
  r.N = N;
  r.t = t;
  r.c1 = c1;
  r.c2 = c2;
  r.Delta = Delta;
  PepParams p{N, t, c1, c2, Delta, PepObjective::dual_gap};
  const SdpSolution gap = sdp_solve(build_pep(p), opt);
  p.objective = PepObjective::primal_residual_sq;
  const SdpSolution res = sdp_solve(build_pep(p), opt);
  r.dual_gap_sdp = gap.value;
  r.dual_gap_status = gap.status;
  r.primal_residual_sdp = std::sqrt(std::max(0.0, res.value));
  r.primal_status = res.status;
  r.dual_gap_conjectured = conjectured_dual_gap(N, t, c1, c2, Delta);
  r.primal_residual_conjectured = conjectured_primal_residual(N, t, c1, c2, Delta);
  return r;
}

std::string conjecture_to_json(const ConjectureReport& r) {
  nlohmann::json j;
  j["N"] = r.N;
  j["t"] = r.t;
  j["c1"] = r.c1;
  j["c2"] = r.c2;
  j["Delta"] = r.Delta;
  j["dual_gap"] = {{"sdp", r.dual_gap_sdp},
                   {"conjectured", r.dual_gap_conjectured},
                   {"difference", r.dual_gap_difference()},
                   {"status", to_string(r.dual_gap_status)}};
  j["primal_residual"] = {{"sdp", r.primal_residual_sdp},
                          {"conjectured", r.primal_residual_conjectured},
                          {"difference", r.primal_residual_difference()},
                          {"status", to_string(r.primal_status)}};
  return j.dump(2);
}

GramImage embed_trace(const SeparableProblem& p, const AdmmTrace& trace, const OptimalPair& opt,
                      const PepParams& params) {
  const int N = params.N;
  if (trace.N != N) throw InvalidInput("embed_trace: trace length differs from params.N");
  const std::size_t r = p.r();
  const auto dim = static_cast<std::size_t>(2 * N + 6);
  std::vector<Vector> cols(dim, Vector(r, 0.0));
  const DualValue last = dual_value(p, trace.lambda(N));
  if (!last.bounded) throw InvalidInput("embed_trace: D(lambda^N) is unbounded");

  cols[0] = trace.lambda(0);
  for (int k = 1; k <= N; ++k)
    cols[static_cast<std::size_t>(k)] = p.A.apply(numkit::sub(trace.x(k), opt.x_star));
  cols[static_cast<std::size_t>(N + 1)] = p.A.apply(numkit::sub(last.x_hat, opt.x_star));
  cols[static_cast<std::size_t>(N + 2)] = opt.lambda_star;
  for (int k = 0; k <= N; ++k)
    cols[static_cast<std::size_t>(N + 4 + k)] = p.B.apply(numkit::sub(trace.z(k), opt.z_star));

  GramImage g;
  g.Y = numkit::gram(cols);
  g.free_values.assign(static_cast<std::size_t>(2 * N + 3), 0.0);
  for (int k = 1; k <= N; ++k) g.free_values[static_cast<std::size_t>(k - 1)] = side_value(p.f, trace.x(k));
  g.free_values[static_cast<std::size_t>(N)] = side_value(p.f, last.x_hat);
  g.free_values[static_cast<std::size_t>(N + 1)] = opt.f_star;
  for (int k = 1; k <= N; ++k)
    g.free_values[static_cast<std::size_t>(N + 1 + k)] = side_value(p.g, trace.z(k));
  g.free_values[static_cast<std::size_t>(2 * N + 2)] = opt.g_star;
  g.objective = build_pep(params).objective.evaluate(g.Y, g.free_values);
  return g;
}

}  // namespace admmlab
