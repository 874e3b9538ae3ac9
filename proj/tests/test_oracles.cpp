#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "apaths/oracle.hpp"
#include "apaths/suites.hpp"

using namespace apaths;

TEST_CASE("so(3) generators satisfy the commutation relations") {
  auto L = so3_generators();
  REQUIRE(L.size() == 3);
  auto comm = [](const Mat& a, const Mat& b) { return a * b - b * a; };
  CHECK((comm(L[0], L[1]) - L[2]).norm_inf() == 0.0);
  CHECK((comm(L[1], L[2]) - L[0]).norm_inf() == 0.0);
  CHECK((comm(L[2], L[0]) - L[1]).norm_inf() == 0.0);
  for (const Mat& g : L) CHECK((g + g.transpose()).norm_inf() == 0.0);
}

TEST_CASE("so(3) coefficient extraction inverts the generator sum") {
  auto L = so3_generators();
  Rng rng(1);
  for (int s = 0; s < 20; ++s) {
    Vec b = rng.uniform_vec(3, -2, 2);
    Mat omega(3);
    for (int i = 0; i < 3; ++i) omega = omega + b[i] * L[i];
    Vec back = so3_coefficients(omega);
    for (int i = 0; i < 3; ++i) CHECK(back[i] == doctest::Approx(b[i]).epsilon(1e-14));
  }
}

TEST_CASE("development of a fixed-axis path is the closed-form rotation") {
  Algebroid so3 = Algebroid::lie_algebra(3, so3_structure_constants());
  TimeGrid grid{257};
  // a(t) = pi * sin^2(pi t) e3 integrates to a rotation by pi/2 about axis 3
  std::vector<Vec> fib(grid.n_t, Vec(3, 0.0));
  for (int k = 0; k < grid.n_t; ++k) {
    double s = std::sin(std::numbers::pi * grid.node(k));
    fib[k][2] = std::numbers::pi * s * s;
  }
  APath p{&so3, grid, std::vector<Vec>(grid.n_t, Vec{}), fib};
  Mat g = development_map(p, so3_generators()).g;

  double c = 0.0, si = 1.0;  // cos(pi/2), sin(pi/2)
  Mat expect(3);
  expect(0, 0) = c;  expect(0, 1) = -si; expect(1, 0) = si;
  expect(1, 1) = c;  expect(2, 2) = 1.0;
  CHECK((g - expect).norm_inf() < 1e-8);
  CHECK(orthogonality_residual(g) < 1e-12);
}

TEST_CASE("development group laws under concatenation and reversal") {
  Algebroid so3 = Algebroid::lie_algebra(3, so3_structure_constants());
  TimeGrid grid{129};
  Rng rng(2);
  auto gens = so3_generators();
  for (int s = 0; s < 5; ++s) {
    APath p{&so3, grid, std::vector<Vec>(grid.n_t, Vec{}),
            random_a0_fiber_curve(3, grid, 0.7, rng)};
    APath q{&so3, grid, std::vector<Vec>(grid.n_t, Vec{}),
            random_a0_fiber_curve(3, grid, 0.7, rng)};
    Mat gp = development_map(p, gens).g;
    Mat gq = development_map(q, gens).g;
    Mat gpq = development_map(concatenate(p, q, 1e-12), gens).g;
    CHECK((gpq - gp * gq).norm_inf() < 1e-12);
    Mat grev = development_map(reverse(p), gens).g;
    CHECK((grev - gp.transpose()).norm_inf() < 1e-12);
  }
  Mat gconst = development_map(constant_path(so3, {}, grid), gens).g;
  CHECK((gconst - Mat::identity(3)).norm_inf() == 0.0);
}

TEST_CASE("development endpoint is invariant along reparametrization families") {
  Algebroid so3 = Algebroid::lie_algebra(3, so3_structure_constants());
  TimeGrid grid{257};
  Rng rng(3);
  auto gens = so3_generators();
  APath p{&so3, grid, std::vector<Vec>(grid.n_t, Vec{}),
          random_a0_fiber_curve(3, grid, 0.7, rng)};
  Mat g0 = development_map(p, gens).g;
  PathFamily fam = reparametrization_family(p, 9);
  for (int j = 1; j < fam.n_eps; ++j) {
    Mat gj = development_map(fam.slice(j), gens).g;
    CHECK((gj - g0).norm_inf() < 1e-4);
  }
}

TEST_CASE("zero-Poisson class map validates its algebroid") {
  Algebroid so3cot = Algebroid::cotangent(so3_dual_bivector());
  TimeGrid grid{17};
  APath p = constant_path(so3cot, {0.1, 0.2, 0.3}, grid);
  CHECK_THROWS_AS(zero_poisson_class(p), std::invalid_argument);

  PoissonBivector zero = PoissonBivector::zero(Chart::box_chart(2, -2, 2));
  Algebroid zcot = Algebroid::cotangent(zero);
  Rng rng(4);
  auto fib = random_a0_fiber_curve(2, grid, 1.0, rng);
  APath zp = solve_base_path(zcot, {0.5, -0.5}, fib, grid);
  FiberwiseCotangentClass cls = zero_poisson_class(zp);
  CHECK(cls.base_point == Vec{0.5, -0.5});
  Vec direct = trapezoid_fiber_integral(zp);
  CHECK(norm_inf(axpy(-1.0, direct, cls.integral)) == 0.0);
}

TEST_CASE("pair-groupoid class map requires an invertible constant bivector") {
  PoissonBivector zero = PoissonBivector::zero(Chart::box_chart(2, -2, 2));
  Algebroid zcot = Algebroid::cotangent(zero);
  TimeGrid grid{17};
  APath p = constant_path(zcot, {0.0, 0.0}, grid);
  CHECK_THROWS_AS(pair_groupoid_class(p), std::invalid_argument);

  PoissonBivector sym(Chart::box_chart(2, -2, 2), {Expr::number(1.0)});
  Algebroid scot = Algebroid::cotangent(sym);
  Rng rng(5);
  APath sp = solve_base_path(scot, {0.1, -0.3},
                             random_a0_fiber_curve(2, grid, 0.5, rng), grid);
  PairGroupoidClass cls = pair_groupoid_class(sp);
  CHECK(norm_inf(axpy(-1.0, path_source_target(sp).first, cls.source)) == 0.0);
  CHECK(norm_inf(axpy(-1.0, path_source_target(sp).second, cls.target)) == 0.0);
}

TEST_CASE("functoriality suites pass for all three oracle families") {
  Rng rng(kDefaultSeed);
  TimeGrid grid{65};

  PoissonBivector zero = PoissonBivector::zero(Chart::box_chart(2, -2, 2));
  Algebroid zcot = Algebroid::cotangent(zero);
  CheckReport zr = check_oracle_functoriality(zcot, OracleFamily::ZeroPoisson,
                                              20, grid, rng);
  CHECK(zr.pass());

  Algebroid so3 = Algebroid::lie_algebra(3, so3_structure_constants());
  CheckReport dr = check_oracle_functoriality(so3, OracleFamily::Development,
                                              20, grid, rng);
  CHECK(dr.pass());

  PoissonBivector sym(Chart::box_chart(2, -2, 2), {Expr::number(1.0)});
  Algebroid scot = Algebroid::cotangent(sym);
  CheckReport pr = check_oracle_functoriality(scot, OracleFamily::PairGroupoid,
                                              20, grid, rng);
  CHECK(pr.pass());
}

TEST_CASE("so(3) family defect against the development oracle stays small") {
  Algebroid so3 = Algebroid::lie_algebra(3, so3_structure_constants());
  Rng rng(6);
  for (int s = 0; s < 5; ++s)
    CHECK(so3_homotopy_oracle_defect(so3, 65, 65, 0.5, rng) < 1e-3);
}
