#include <doctest.h>

#include <json.hpp>
#include <variant>

#include "admmlab/errors.hpp"
#include "admmlab/gallery.hpp"
#include "admmlab/planalysis.hpp"
#include "admmlab/rates.hpp"

using namespace admmlab;

namespace {

GalleryInstance pl_instance(int n = 1) { return make_instance(GalleryKind::pl_l1_quadratic, 2, 1.0, 0.0, n); }

std::vector<Vector> scalars(std::initializer_list<double> xs) {
  std::vector<Vector> out;
  for (double x : xs) out.push_back({x});
  return out;
}

// h(x - x0) written as a PLQ function of x.
PlqFunction shifted(const PlqFunction& h, double x0) {
  std::vector<AffinePiece> pieces;
  for (const auto& pc : h.pieces())
    pieces.push_back({pc.slope - h.q() * x0, pc.intercept - pc.slope * x0 + 0.5 * h.q() * x0 * x0});
  return PlqFunction(h.q(), pieces);
}

}  // namespace

TEST_CASE("PL constant of the l1-quadratic instance") {
  const auto g = pl_instance();
  const PlEstimate e = estimate_pl_constant(g.problem, g.optimal, scalars({1.5, 2.0, 3.0}));
  CHECK(e.Lp_hat == doctest::Approx(2.0).epsilon(1e-12));
  REQUIRE(e.samples.size() == 3);
  CHECK(e.samples[1].gap == doctest::Approx(1.0));
  CHECK(e.samples[1].xi_norm_sq == doctest::Approx(4.0));
  CHECK(e.Lp_hat >= 0.5);

  CHECK_THROWS_AS(estimate_pl_constant(g.problem, g.optimal, scalars({0.0})), InvalidInput);
  CHECK_THROWS_AS(estimate_pl_constant(g.problem, g.optimal, scalars({0.3, -0.7})), InvalidInput);
}

TEST_CASE("PL samples and report") {
  const auto g = pl_instance(3);
  const auto lambdas = sample_lambdas(g.optimal.lambda_star, 100, 5);
  CHECK(lambdas.size() == 100);
  CHECK(sample_lambdas(g.optimal.lambda_star, 100, 5) == lambdas);
  const PlEstimate e = estimate_pl_constant(g.problem, g.optimal, lambdas);
  CHECK(e.Lp_hat == doctest::Approx(2.0).epsilon(1e-9));
  for (const auto& s : e.samples) CHECK(s.gap <= s.xi_norm_sq / (2.0 * e.Lp_hat) + 1e-12);

  const auto j = nlohmann::json::parse(pl_report_json(e));
  CHECK(j.contains("Lp_hat"));
  CHECK(j["n_samples"] == 100);
  CHECK(j["worst_sample"].contains("lambda"));
  CHECK(j["worst_sample"].contains("gap"));
  CHECK(j["worst_sample"].contains("xi_norm_sq"));
  CHECK(pl_report_csv(e).find('\n') != std::string::npos);
}

TEST_CASE("PL constant is translation invariant") {
  const auto g = pl_instance();
  SeparableProblem p = g.problem;
  const double x0 = 0.7, z0 = -1.3;
  const PlqFunction h = std::get<std::vector<PlqFunction>>(g.problem.f)[0];
  const PlqFunction fx = shifted(h, x0), gz = shifted(h, z0);
  p.f = std::vector<PlqFunction>{fx};
  p.g = std::vector<PlqFunction>{gz};
  p.b = {x0 + z0};
  OptimalPair opt{{x0}, {z0}, {0.0}, fx.value(x0), gz.value(z0)};
  const auto lambdas = sample_lambdas(g.optimal.lambda_star, 60, 2);
  const double base = estimate_pl_constant(g.problem, g.optimal, lambdas).Lp_hat;
  const double moved = estimate_pl_constant(p, opt, lambdas).Lp_hat;
  CHECK(moved == doctest::Approx(base).epsilon(1e-9));
}

TEST_CASE("inner-product inequality") {
  const auto g = pl_instance();
  const InnerProductCheck at_star = lemma_inner_product_check(g.problem, g.optimal, {0.0}, 1.0);
  CHECK(at_star.lhs == 0.0);
  CHECK(at_star.rhs == 0.0);
  CHECK(at_star.gap_ratio == 0.0);

  SeparableProblem q;
  q.f = std::vector<PlqFunction>{PlqFunction::quadratic(1.0)};
  q.g = std::vector<PlqFunction>{PlqFunction::quadratic(1.0)};
  q.A = Matrix::identity(1);
  q.B = Matrix::identity(1);
  q.b = {0.0};
  const InnerProductCheck c = lemma_inner_product_check(q, Vector{1.0}, Vector{}, 0.5);
  CHECK(c.lhs <= c.rhs + 1e-12);
  CHECK(c.rhs > 0.0);

  const auto g3 = pl_instance(2);
  for (const auto& l : sample_lambdas(g3.optimal.lambda_star, 100, 9)) {
    const InnerProductCheck s = lemma_inner_product_check(g3.problem, g3.optimal, l, 1.0);
    CHECK(s.lhs <= s.rhs + 1e-9 * (1.0 + s.rhs));
    CHECK(s.gap_ratio <= pl_linear_rate(1.0, 1.0, 1.0, 2.0) + 1e-9);
  }
}

TEST_CASE("observed contraction stays below the PL rate") {
  const auto g = pl_instance(2);
  const auto lambdas = sample_lambdas(g.optimal.lambda_star, 100, 1);
  for (double t : {0.25, 0.5, 1.0}) {
    const double r = observed_contraction(g.problem, g.optimal, t, lambdas);
    CHECK(r >= 0.0);
    CHECK(r <= pl_linear_rate(1.0, 1.0, t, 2.0) + 1e-9);
  }
}

TEST_CASE("necessity probe") {
  const auto g = pl_instance();
  const auto lambdas = sample_lambdas(g.optimal.lambda_star, 50, 3);
  const NecessityReport r = necessity_probe(g.problem, g.optimal, 0.5, 1.0, lambdas);
  CHECK(r.implied_Lp == 0.25);
  CHECK(r.n_samples == 50);
  CHECK(r.pass);
  CHECK(r.worst_ratio <= 1.0);

  const NecessityReport fixed = necessity_probe(g.problem, g.optimal, 0.5, 1.0, scalars({0.0, 0.5, -1.0}));
  CHECK(fixed.pass);

  const NecessityReport bad = necessity_probe(g.problem, g.optimal, 0.9, 0.01, lambdas);
  CHECK_FALSE(bad.pass);
  CHECK(bad.worst_ratio > 1.0);

  CHECK_THROWS_AS(necessity_probe(g.problem, g.optimal, 1.0, 1.0, lambdas), InvalidInput);
  CHECK_THROWS_AS(necessity_probe(g.problem, g.optimal, 0.5, 0.0, lambdas), InvalidInput);
}
