#include <doctest.h>

#include <random>

#include "../support.hpp"
#include "admmlab/errors.hpp"
#include "admmlab/plq.hpp"

using namespace admmlab;

namespace {

PlqFunction random_plq(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::uniform_int_distribution<int> k(1, 4);
  std::vector<AffinePiece> pieces;
  const int count = k(rng);
  for (int i = 0; i < count; ++i) pieces.push_back({u(rng), u(rng)});
  return PlqFunction(std::abs(u(rng)), pieces);
}

// Golden-section search on [lo, hi]; the objective is convex.
double golden_min(const std::function<double(double)>& phi, double lo, double hi) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  for (int it = 0; it < 300; ++it) {
    const double c = b - r * (b - a), d = a + r * (b - a);
    if (phi(c) <= phi(d)) b = d;
    else a = c;
  }
  return 0.5 * (a + b);
}

}  // namespace

TEST_CASE("plq_value examples") {
  const PlqFunction h(1.0, {{0.5, 0.0}, {-0.5, 0.0}});
  CHECK(plq_value(h, 2.0) == 3.0);
  CHECK(plq_value(PlqFunction::abs(1.0), 0.0) == 0.0);
  // dual_gap_tight g for N = 4, t = 1 at z = 1/8
  const double N = 4, t = 1, a = 1.0 / (2 * N * t);
  const PlqFunction g(0.0, {{(N - 1) / (2 * N), -a * (2 * N - 1) / (2 * N)}, {-0.5, 0.0}});
  CHECK(plq_value(g, a) == doctest::Approx(-1.0 / 16.0));
}

TEST_CASE("plq_subdiff examples") {
  const Interval i1 = plq_subdiff(PlqFunction::abs(1.0), 0.0);
  CHECK(i1.lo == -1.0);
  CHECK(i1.hi == 1.0);
  const Interval i2 = plq_subdiff(PlqFunction(1.0, {{0.5, 0.0}, {-0.5, 0.0}}), 0.0);
  CHECK(i2.lo == -0.5);
  CHECK(i2.hi == 0.5);
  const Interval i3 = plq_subdiff(PlqFunction::abs(1.0), 3.0);
  CHECK(i3.lo == 1.0);
  CHECK(i3.hi == 1.0);
}

TEST_CASE("plq_argmin_quadratic examples") {
  CHECK(plq_argmin_quadratic(PlqFunction::abs(1.0), -3.0, 1.0) == doctest::Approx(2.0));
  const PlqFunction h(1.0, {{0.5, 0.0}, {-0.5, 0.0}});
  for (double t : {0.0, 0.25, 1.0, 7.0}) CHECK(plq_argmin_quadratic(h, -0.5, t) == 0.0);
  CHECK(plq_argmin_quadratic(PlqFunction::quadratic(1.0), 1.0, 2.0) == doctest::Approx(-1.0 / 3.0));
}

TEST_CASE("plq_argmin_quadratic edge cases") {
  CHECK_THROWS_AS(plq_argmin_quadratic(PlqFunction::abs(1.0), 2.0, 0.0), Unbounded);
  CHECK_THROWS_AS(plq_argmin_quadratic(PlqFunction::abs(1.0), 0.0, -1.0), InvalidInput);
  // flat bottom: leftmost minimizer
  const PlqFunction flat(0.0, {{1.0, -1.0}, {0.0, 0.0}, {-1.0, -1.0}});
  CHECK(plq_argmin_quadratic(flat, 0.0, 0.0) == doctest::Approx(-1.0));
  CHECK_THROWS_AS(PlqFunction(-1.0, {{0.0, 0.0}}), InvalidInput);
  CHECK_THROWS_AS(PlqFunction(1.0, {}), InvalidInput);
}

TEST_CASE("separable_argmin examples") {
  const auto half = PlqFunction::quadratic(1.0);
  const Vector x1 = separable_argmin({half, half}, Vector{1, -1}, Vector{1, 1});
  CHECK(x1[0] == doctest::Approx(-0.5));
  CHECK(x1[1] == doctest::Approx(0.5));
  const auto ab = PlqFunction::abs(1.0);
  CHECK(separable_argmin({ab, ab}, Vector{0, 0}, Vector{1, 1}) == Vector{0, 0});
  const Vector x3 = separable_argmin({half, ab}, Vector{-2, -3}, Vector{1, 1});
  CHECK(x3[0] == doctest::Approx(1.0));
  CHECK(x3[1] == doctest::Approx(2.0));
  try {
    separable_argmin({half, ab}, Vector{0, 5}, Vector{1, 0});
    FAIL("expected Unbounded");
  } catch (const Unbounded& e) {
    CHECK(e.index() == 1);
  }
}

TEST_CASE("plq_value is convex along lines") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int rep = 0; rep < 500; ++rep) {
    const PlqFunction h = random_plq(rng);
    const double a = u(rng), b = u(rng);
    CHECK(plq_value(h, 0.5 * (a + b)) <= 0.5 * (plq_value(h, a) + plq_value(h, b)) + 1e-12);
  }
}

TEST_CASE("argmin satisfies the subdifferential certificate") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int rep = 0; rep < 500; ++rep) {
    const PlqFunction h = random_plq(rng);
    const double lin = u(rng), quad = std::abs(u(rng)) + 0.01;
    const double x = plq_argmin_quadratic(h, lin, quad);
    CHECK(plq_subdiff(h, x).contains(-(lin + quad * x), 1e-9));
  }
}

TEST_CASE("argmin agrees with golden-section search") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int rep = 0; rep < 200; ++rep) {
    const PlqFunction h = random_plq(rng);
    const double lin = u(rng), quad = std::abs(u(rng)) + 0.1;
    const double x = plq_argmin_quadratic(h, lin, quad);
    const auto phi = [&](double y) { return plq_value(h, y) + lin * y + 0.5 * quad * y * y; };
    const double ref = golden_min(phi, -100.0, 100.0);
    CHECK(x == doctest::Approx(ref).epsilon(1e-6).scale(1));
  }
}

TEST_CASE("soft-threshold identity") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> ua(0.0, 3.0), uv(-5.0, 5.0);
  for (int rep = 0; rep < 100; ++rep) {
    const double alpha = ua(rng), v = uv(rng);
    const double x = plq_argmin_quadratic(PlqFunction::abs(alpha), -v, 1.0);
    const double ref = (v > 0 ? 1.0 : -1.0) * std::max(std::abs(v) - alpha, 0.0);
    CHECK(x == doctest::Approx(ref).epsilon(1e-12).scale(1));
  }
}

TEST_CASE("quadratic oracle") {
  const QuadraticOracle o(Matrix::from_rows({{2, 0}, {0, 1}}), Vector{1, -1});
  CHECK(o.value(Vector{1, 1}) == doctest::Approx(1.5));
  const Vector x = o.argmin(Vector{0, 0}, Matrix(2, 2));
  CHECK(x[0] == doctest::Approx(-0.5));
  CHECK(x[1] == doctest::Approx(1.0));
  CHECK_THROWS_AS(QuadraticOracle(Matrix(2, 2), Vector{1}), InvalidInput);
}

TEST_CASE("random instances carry a valid saddle point") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto inst = testsupport::random_plq(seed, 3, seed % 2 == 0);
    CHECK(optimal_pair_violation(inst.problem, inst.optimal) <= 1e-12);
    CHECK(relative_modulus(inst.problem.f, inst.problem.A) == doctest::Approx(inst.c1));
  }
}
