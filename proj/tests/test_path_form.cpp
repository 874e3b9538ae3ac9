#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "apaths/path_form.hpp"
#include "apaths/suites.hpp"

using namespace apaths;

TEST_CASE("discrete canonical form is antisymmetric and bilinear") {
  TimeGrid grid{33};
  Rng rng(1);
  for (int s = 0; s < 50; ++s) {
    PathVariation d1 = random_variation(3, 3, grid, rng);
    PathVariation d2 = random_variation(3, 3, grid, rng);
    PathVariation d3 = random_variation(3, 3, grid, rng);
    double lam = rng.uniform(-2, 2);

    double w12 = eval_path_form(grid, d1, d2);
    CHECK(std::abs(w12 + eval_path_form(grid, d2, d1)) < 1e-14);
    CHECK(std::abs(eval_path_form(grid, d1, d1)) < 1e-14);

    PathVariation d23 = d2;
    for (int k = 0; k < grid.n_t; ++k) {
      d23.dbase[k] = axpy(lam, d3.dbase[k], d2.dbase[k]);
      d23.dfiber[k] = axpy(lam, d3.dfiber[k], d2.dfiber[k]);
    }
    double lhs = eval_path_form(grid, d1, d23);
    double rhs = w12 + lam * eval_path_form(grid, d1, d3);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("node-basis pairing matrix is antisymmetric and invertible") {
  for (int n_t : {5, 17, 33}) {
    TimeGrid grid{n_t};
    auto g = path_form_gram(2, grid);
    int n = static_cast<int>(g.size());
    REQUIRE(n == 2 * 2 * n_t);
    Mat m(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        m(i, j) = g[i][j];
        CHECK(g[i][j] == -g[j][i]);
      }
    CHECK_NOTHROW(inverse(m));  // nondegenerate on the discretized path space
  }
}

TEST_CASE("pairing matrix reproduces eval_path_form") {
  TimeGrid grid{9};
  int dim = 2;
  auto g = path_form_gram(dim, grid);
  Rng rng(2);
  PathVariation d1 = random_variation(dim, dim, grid, rng);
  PathVariation d2 = random_variation(dim, dim, grid, rng);
  auto flatten = [&](const PathVariation& d) {
    Vec v;
    for (int k = 0; k < grid.n_t; ++k)
      for (int i = 0; i < dim; ++i) v.push_back(d.dbase[k][i]);
    for (int k = 0; k < grid.n_t; ++k)
      for (int i = 0; i < dim; ++i) v.push_back(d.dfiber[k][i]);
    return v;
  };
  Vec v1 = flatten(d1), v2 = flatten(d2);
  double via_gram = 0.0;
  for (std::size_t i = 0; i < v1.size(); ++i)
    for (std::size_t j = 0; j < v2.size(); ++j) via_gram += v1[i] * g[i][j] * v2[j];
  CHECK(via_gram == doctest::Approx(eval_path_form(grid, d1, d2)).epsilon(1e-12));
}

TEST_CASE("multiplicativity under concatenation") {
  Rng rng(3);
  PoissonBivector pi = so3_dual_bivector();
  Algebroid cot = Algebroid::cotangent(pi);
  TimeGrid grid{65};
  APath q = solve_base_path(cot, {0.4, 0.0, 0.2},
                            random_a0_fiber_curve(3, grid, 0.4, rng), grid);
  APath p = solve_base_path(cot, path_source_target(q).second,
                            random_a0_fiber_curve(3, grid, 0.4, rng), grid);
  CheckReport rep = check_multiplicativity(p, q, 100, rng);
  CHECK(rep.pass());
  for (const CheckResult& r : rep.records)
    if (r.name == "multiplicativity_split_additivity") CHECK(r.residual < 1e-12);
}

TEST_CASE("constraint tangents linearize the base solver") {
  Rng rng(4);
  PoissonBivector pi = so3_dual_bivector();
  Algebroid cot = Algebroid::cotangent(pi);
  TimeGrid grid{65};
  auto fib = random_a0_fiber_curve(3, grid, 0.4, rng);
  APath p = solve_base_path(cot, {0.3, -0.2, 0.4}, fib, grid);

  auto dfib = random_a0_fiber_curve(3, grid, 0.3, rng);
  Vec dx0 = rng.uniform_vec(3, -0.3, 0.3);
  PathVariation tang = constraint_tangent(p, dfib, dx0);

  double eps = 1e-6;
  std::vector<Vec> fp(grid.n_t), fm(grid.n_t);
  for (int k = 0; k < grid.n_t; ++k) {
    fp[k] = axpy(eps, dfib[k], fib[k]);
    fm[k] = axpy(-eps, dfib[k], fib[k]);
  }
  APath pp = solve_base_path(cot, axpy(eps, dx0, Vec{0.3, -0.2, 0.4}), fp, grid);
  APath pm = solve_base_path(cot, axpy(-eps, dx0, Vec{0.3, -0.2, 0.4}), fm, grid);
  for (int k = 0; k < grid.n_t; k += 8) {
    Vec fd = scaled(0.5 / eps, axpy(-1.0, pm.base[k], pp.base[k]));
    for (int i = 0; i < 3; ++i)
      CHECK(tang.dbase[k][i] == doctest::Approx(fd[i]).epsilon(5e-4));
  }
}

TEST_CASE("kernel containment: zero-Poisson foliation pairs to zero exactly") {
  Rng rng(5);
  PoissonBivector zero = PoissonBivector::zero(Chart::box_chart(2, -2, 2));
  Algebroid zcot = Algebroid::cotangent(zero);
  PathFamily fam = zero_poisson_exact_homotopy_family(zcot, {0.1, 0.3}, 65, 33, rng);
  CheckReport rep = check_kernel_containment(fam, 25, rng);
  CHECK(rep.pass());
  for (const CheckResult& r : rep.records)
    if (r.name == "kernel_containment_pairing") CHECK(r.residual < 1e-10);
}

TEST_CASE("kernel containment: so(3)*-cotangent reparametrization family") {
  Rng rng(6);
  PoissonBivector pi = so3_dual_bivector();
  Algebroid cot = Algebroid::cotangent(pi);
  PathFamily fam = so3_cotangent_homotopy_family(cot, 65, 33, rng);
  CheckReport rep = check_kernel_containment(fam, 25, rng);
  CHECK(rep.pass());
}

TEST_CASE("reduced brackets against the oracle groupoids") {
  Rng rng(7);
  PoissonBivector sym(Chart::box_chart(2, -2, 2), {Expr::number(1.0)});
  Expr x1 = Expr::var(0), x2 = Expr::var(1);

  // {x1, x2}_pi = 1 on the chart; the pair groupoid must reproduce it
  CheckReport r1 = oracle_reduced_bracket(ReducedBracketModel::SymplecticPair,
                                          sym, x1, x2, 25, 1e-12, rng);
  CHECK(r1.pass());
  CheckReport r2 = oracle_reduced_bracket(ReducedBracketModel::SymplecticPair,
                                          sym, x1 * x1 + x2, x1 * x2, 25, 1e-12, rng);
  CHECK(r2.pass());

  PoissonBivector zero = PoissonBivector::zero(Chart::box_chart(2, -2, 2));
  CheckReport r3 = oracle_reduced_bracket(ReducedBracketModel::ZeroPoissonCotangent,
                                          zero, x1 * x1, x1 * x2, 25, 1e-15, rng);
  CHECK(r3.pass());
  CHECK(r3.max_residual() == 0.0);  // identically zero bracket on both sides
}

TEST_CASE("variation magnitude and zero-at-ends option") {
  TimeGrid grid{17};
  Rng rng(8);
  PathVariation d = random_variation(2, 2, grid, rng, /*zero_at_ends=*/true);
  CHECK(norm_inf(d.dbase.front()) == 0.0);
  CHECK(norm_inf(d.dbase.back()) == 0.0);
  CHECK(norm_inf(d.dfiber.front()) == 0.0);
  CHECK(norm_inf(d.dfiber.back()) == 0.0);
  CHECK(d.magnitude() > 0.0);
}
