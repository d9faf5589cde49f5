#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <random>
#include <sstream>

#include "../support.hpp"
#include "admmlab/errors.hpp"
#include "admmlab/gallery.hpp"
#include "admmlab/pep.hpp"
#include "admmlab/rates.hpp"
#include "admmlab/sdpa.hpp"

using namespace admmlab;

namespace {

SdpProblem trivial_sdp() {
  SdpProblem s;
  s.gram_dim = 1;
  SdpConstraint c;
  c.lhs.add_gram(0, 0, 1.0);
  c.relation = Relation::Equal;
  c.rhs = 1.0;
  s.constraints.push_back(c);
  return s;
}

void check_optimal(const SdpSolution& s) {
  CHECK(s.status == SdpStatus::optimal);
  CHECK(s.duality_gap <= 1e-7 * (1.0 + std::abs(s.value)));
  CHECK(numkit::psd_check(s.Y).is_psd);
}

double pep_value(int N, double t, double c1, double c2, double Delta, PepObjective o) {
  const SdpSolution s = sdp_solve(build_pep({N, t, c1, c2, Delta, o}));
  check_optimal(s);
  return s.value;
}

}  // namespace

TEST_CASE("interpolation blocks") {
  CHECK(interpolation_block(2, 0.0).size() == 2);
  CHECK(interpolation_block(6, 1.0).size() == 30);
  for (const auto& tpl : interpolation_block(4, 0.5)) CHECK(tpl.i != tpl.j);
  CHECK_THROWS_AS(interpolation_block(1, 0.0), InvalidInput);
  CHECK_THROWS_AS(interpolation_block(3, -1.0), InvalidInput);
}

TEST_CASE("build_pep layout") {
  const SdpProblem a = build_pep({4, 1.0, 1.0, 0.0, 1.0, PepObjective::dual_gap});
  CHECK(a.gram_dim == 14);
  CHECK(a.num_free == 11);
  CHECK(a.gram_names.size() == 14);
  CHECK(a.free_names.size() == 11);
  CHECK(a.constraints.size() == 51);
  CHECK_NOTHROW(a.validate());
  const SdpProblem b = build_pep({4, 1.0, 1.0, 0.0, 1.0, PepObjective::dual_gap});
  CHECK(write_sdpa(a) == write_sdpa(b));
  CHECK(build_pep({5, 1.0, 1.0, 0.0, 1.0, PepObjective::dual_gap}).constraints.size() == 73);
  CHECK_THROWS_AS(build_pep({0, 1.0, 1.0, 0.0, 1.0, PepObjective::dual_gap}), InvalidInput);
  CHECK_THROWS_AS(build_pep({4, 0.0, 1.0, 0.0, 1.0, PepObjective::dual_gap}), InvalidInput);
  CHECK_THROWS_AS(build_pep({4, 1.0, -1.0, 0.0, 1.0, PepObjective::dual_gap}), InvalidInput);
  CHECK(parse_pep_objective("primal_residual_sq") == PepObjective::primal_residual_sq);
  CHECK_THROWS_AS(parse_pep_objective("x"), UnsupportedKind);
}

TEST_CASE("small SDPs") {
  const SdpSolution s = sdp_solve(trivial_sdp());
  check_optimal(s);
  CHECK(s.value == doctest::Approx(0.0).scale(1));

  SdpProblem u;
  u.gram_dim = 2;
  u.objective.add_gram(0, 1, 1.0);
  for (int i = 0; i < 2; ++i) {
    SdpConstraint c;
    c.lhs.add_gram(i, i, 1.0);
    c.relation = Relation::Equal;
    c.rhs = 1.0;
    u.constraints.push_back(c);
  }
  const SdpSolution su = sdp_solve(u);
  check_optimal(su);
  CHECK(su.value == doctest::Approx(1.0).epsilon(1e-7));

  // max w subject to w <= 3 - Y00, Y00 >= 1
  SdpProblem f;
  f.gram_dim = 1;
  f.num_free = 1;
  f.objective.add_free(0, 1.0);
  SdpConstraint c1;
  c1.lhs.add_free(0, 1.0);
  c1.lhs.add_gram(0, 0, 1.0);
  c1.rhs = 3.0;
  SdpConstraint c2;
  c2.lhs.add_gram(0, 0, -1.0);
  c2.rhs = -1.0;
  f.constraints = {c1, c2};
  const SdpSolution sf = sdp_solve(f);
  check_optimal(sf);
  CHECK(sf.value == doctest::Approx(2.0).epsilon(1e-7));
  CHECK(constraint_violation(f, sf.Y, sf.free_values) <= 1e-7);

  SdpProblem bad = trivial_sdp();
  bad.constraints[0].rhs = -1.0;
  CHECK(sdp_solve(bad).status == SdpStatus::infeasible);

  SdpProblem undeclared = trivial_sdp();
  undeclared.objective.add_free(0, 1.0);
  CHECK_THROWS_AS(undeclared.validate(), InvalidInput);
}

TEST_CASE("dual-gap PEP matches the bound") {
  for (int N : {4, 5, 6})
    for (double t : {0.5, 1.0}) CHECK(std::abs(pep_value(N, t, 1.0, 0.0, 1.0, PepObjective::dual_gap) - 1.0 / (4.0 * N * t)) <= 1e-5);
}

TEST_CASE("residual PEPs match the bounds") {
  for (int N : {4, 5})
    for (double t : {0.5, 1.0}) {
      const double pr = pep_value(N, t, 1.0, 0.0, 1.0, PepObjective::primal_residual_sq);
      CHECK(std::abs(std::sqrt(pr) - bound_primal_residual(1.0, t, N, 1.0)) <= 1e-5);
      const double dr = pep_value(N, t, 1.0, 0.0, 1.0, PepObjective::dual_residual_sq);
      CHECK(std::abs(std::sqrt(dr) - bound_dual_residual(1.0, t, N, 1.0)) <= 1e-5);
    }
}

TEST_CASE("zero budget and homogeneity") {
  CHECK(std::abs(pep_value(4, 1.0, 1.0, 0.0, 0.0, PepObjective::dual_gap)) <= 1e-6);
  const double v1 = pep_value(5, 1.0, 1.0, 0.0, 1.0, PepObjective::dual_gap);
  const double v2 = pep_value(5, 1.0, 1.0, 0.0, 2.0, PepObjective::dual_gap);
  CHECK(std::abs(v2 - 2.0 * v1) <= 1e-6 * 2.0 * v1);
}

TEST_CASE("gallery runs embed into the relaxation") {
  const std::pair<GalleryKind, PepObjective> kinds[] = {
      {GalleryKind::dual_gap_tight, PepObjective::dual_gap},
      {GalleryKind::primal_residual_tight, PepObjective::primal_residual_sq},
      {GalleryKind::dual_residual_tight, PepObjective::dual_residual_sq}};
  for (const auto& [kind, obj] : kinds)
    for (int N : {4, 5})
      for (double t : {0.5, 1.0}) {
        const auto inst = make_instance(kind, N, t, 1.0);
        const AdmmTrace tr = admm_run(inst.problem, inst.config);
        const PepParams params{N, t, 1.0, 0.0, 1.0, obj};
        const SdpProblem sdp = build_pep(params);
        const GramImage img = embed_trace(inst.problem, tr, inst.optimal, params);
        CHECK(constraint_violation(sdp, img.Y, img.free_values) <= 1e-9);
        CHECK(numkit::psd_check(img.Y).is_psd);
        const SdpSolution s = sdp_solve(sdp);
        check_optimal(s);
        CHECK(img.objective <= s.value + 1e-6);
        // the gallery instances attain the relaxation optimum
        CHECK(std::abs(img.objective - s.value) <= 1e-5);
      }
}

TEST_CASE("random translated runs embed into the relaxation") {
  std::mt19937_64 rng(17);
  int checked = 0;
  for (std::uint64_t seed = 0; checked < 6; ++seed) {
    const auto inst = testsupport::random_plq(seed, 2, true);
    if (inst.c1 < 0.5) continue;
    const Vector l0 = testsupport::random_vector(rng, 2, 1.0), z0 = testsupport::random_vector(rng, 2, 1.0);
    const double t = 0.5;
    const AdmmTrace tr = admm_run(inst.problem, {t, 4, l0, z0});
    if (!dual_value(inst.problem, tr.lambda(4)).bounded) continue;
    const double Delta = numkit::norm_sq(numkit::sub(l0, inst.optimal.lambda_star)) +
                         t * t * numkit::norm_sq(inst.problem.B.apply(z0));
    const PepParams params{4, t, inst.c1, 0.0, Delta, PepObjective::dual_gap};
    const SdpProblem sdp = build_pep(params);
    const GramImage img = embed_trace(inst.problem, tr, inst.optimal, params);
    CHECK(constraint_violation(sdp, img.Y, img.free_values) <= 1e-9 * (1.0 + Delta));
    CHECK(img.objective <= Delta / (4.0 * 4.0 * t) + 1e-9);
    ++checked;
  }
}

TEST_CASE("rate PEP") {
  const RatePepResult a = solve_rate_pep({1.0, 1.0, 1.0, 0.5}, 0.67);
  CHECK(a.status == SdpStatus::optimal);
  CHECK(a.relaxation_optimum <= pl_linear_rate(1.0, 1.0, 1.0, 0.5) + 1e-5);
  CHECK_FALSE(a.exceeds_alpha);
  const RatePepResult b = solve_rate_pep({0.5, 0.25, 1.0, 1.0}, 0.65);
  CHECK(b.status == SdpStatus::optimal);
  CHECK(b.relaxation_optimum <= 11.0 / 17.0 + 1e-5);
  const RatePepResult c = solve_rate_pep({1.0, 1.0, 1.0, 1e-3}, 0.999);
  CHECK(c.status == SdpStatus::optimal);
  CHECK(c.relaxation_optimum >= 0.99);
  CHECK(build_rate_pep({1.0, 1.0, 1.0, 0.5}, 0.5).threshold == 0.5);
  CHECK_THROWS_AS(build_rate_pep({1.0, 1.0, 1.0, 0.5}, 1.0), InvalidInput);
  CHECK_THROWS_AS(build_rate_pep({1.0, 1.0, 1.0, 0.5}, 0.0), InvalidInput);
  CHECK_THROWS_AS(build_rate_pep({1.0, 1.0, 1.0, 0.0}, 0.5), InvalidInput);
}

TEST_CASE("conjectured formulas") {
  CHECK(conjectured_dual_gap(4, 1.0, 1.0, 1.0, 1.0) == doctest::Approx(1.0 / 17.0));
  CHECK(conjectured_primal_residual(4, 1.0, 1.0, 1.0, 1.0) == doctest::Approx(1.0 / 4.5));
  CHECK(conjectured_dual_gap(6, 0.5, 1.0, 1e-12, 2.0) == doctest::Approx(bound_dual_gap(2.0, 0.5, 6, 1.0)));
  CHECK(conjectured_primal_residual(6, 0.5, 1.0, 1e-12, 2.0) ==
        doctest::Approx(bound_primal_residual(2.0, 0.5, 6, 1.0)));
  const ConjectureReport r = check_conjecture(4, 1.0, 1.0, 1.0);
  CHECK(r.dual_gap_status == SdpStatus::optimal);
  CHECK(r.primal_status == SdpStatus::optimal);
  CHECK(r.dual_gap_difference() <= 1e-4);
  CHECK(r.primal_residual_difference() <= 1e-4);
  const auto j = nlohmann::json::parse(conjecture_to_json(r));
  CHECK(j["dual_gap"].contains("sdp"));
  CHECK(j["primal_residual"].contains("sdp"));
  CHECK_THROWS_AS(check_conjecture(4, 1.0, 1.0, 0.0), InvalidInput);
  CHECK_THROWS_AS(check_conjecture(3, 1.0, 1.0, 1.0), InvalidInput);
}

TEST_CASE("SDPA export") {
  const std::string triv = write_sdpa(trivial_sdp());
  CHECK(std::count(triv.begin(), triv.end(), '\n') == 5);
  CHECK(triv == write_sdpa(trivial_sdp()));

  SdpProblem pep = build_pep({4, 1.0, 1.0, 0.0, 1.0, PepObjective::dual_gap});
  const std::string text = write_sdpa(pep);
  const SdpProblem back = read_sdpa(text);
  CHECK(back.gram_dim == pep.gram_dim);
  CHECK(back.num_free == pep.num_free);
  REQUIRE(back.constraints.size() == pep.constraints.size());
  for (std::size_t i = 0; i < pep.constraints.size(); ++i) {
    LinearFunctional want = pep.constraints[i].lhs;
    want.constant = 0.0;
    want.prune();
    LinearFunctional got = back.constraints[i].lhs;
    got.prune();
    CHECK(got == want);
    CHECK(back.constraints[i].relation == pep.constraints[i].relation);
    CHECK(back.constraints[i].rhs == pep.constraints[i].rhs - pep.constraints[i].lhs.constant);
  }
  CHECK(write_sdpa(back) == text);

  const auto dir = std::filesystem::temp_directory_path() / "admmlab_sdpa_test";
  std::filesystem::create_directories(dir);
  export_sdpa(pep, (dir / "a.dat-s").string());
  export_sdpa(pep, (dir / "b.dat-s").string());
  auto slurp = [](const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
  };
  CHECK(slurp(dir / "a.dat-s") == slurp(dir / "b.dat-s"));
  CHECK(slurp(dir / "a.dat-s") == text);
  CHECK_THROWS_AS(export_sdpa(pep, "/nonexistent/dir/x.dat-s"), IoError);
  CHECK_THROWS_AS(read_sdpa("garbage"), InvalidInput);
}

TEST_CASE("solution JSON") {
  const auto j = nlohmann::json::parse(solution_to_json(sdp_solve(trivial_sdp())));
  CHECK(j["status"] == "optimal");
  CHECK(j.contains("value"));
  CHECK(j.contains("duality_gap"));
}
