#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "apaths/etale.hpp"

using namespace apaths;

TEST_CASE("stock groupoids validate") {
  Rng rng(1);
  for (auto G : {FiniteActionGroupoid::z2_inversion(),
                 FiniteActionGroupoid::z4_rotation(),
                 FiniteActionGroupoid::trivial()}) {
    CHECK(G.validate(50, 1e-12, rng).pass());
    CHECK(G.multiply(G.identity(), G.identity()) == G.identity());
  }
  CHECK(FiniteActionGroupoid::z2_inversion().order() == 2);
  CHECK(FiniteActionGroupoid::z4_rotation().order() == 4);
}

TEST_CASE("broken multiplication table is rejected") {
  Chart c = Chart::box_chart(2, -1, 1);
  std::vector<Expr> id = {Expr::var(0), Expr::var(1)};
  std::vector<Expr> inv = {-Expr::var(0), -Expr::var(1)};
  // table without an identity element
  CHECK_THROWS(FiniteActionGroupoid(c, {{1, 1}, {1, 1}}, {id, inv}));
  // action list size mismatch
  CHECK_THROWS(FiniteActionGroupoid(c, {{0, 1}, {1, 0}}, {id}));
}

TEST_CASE("pullback of forms through coordinate maps") {
  Rng rng(2);
  Chart c = Chart::box_chart(2, -1, 1);
  CoordForm w = CoordForm::symplectic_standard(2);

  // swap: (x1,x2) -> (x2,x1) flips orientation
  std::vector<Expr> swap_map = {Expr::var(1), Expr::var(0)};
  CoordForm swapped = pullback_form(w, swap_map);
  // inversion preserves it
  std::vector<Expr> inv_map = {-Expr::var(0), -Expr::var(1)};
  CoordForm inverted = pullback_form(w, inv_map);
  // scaling multiplies by the Jacobian determinant
  std::vector<Expr> scale_map = {Expr::number(2.0) * Expr::var(0),
                                 Expr::number(3.0) * Expr::var(1)};
  CoordForm scaled_form = pullback_form(w, scale_map);
  for (int s = 0; s < 20; ++s) {
    Vec x = c.random_point(rng);
    CHECK(swapped.coeff[0].eval(x) == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(inverted.coeff[0].eval(x) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(scaled_form.coeff[0].eval(x) == doctest::Approx(6.0).epsilon(1e-14));
  }

  // degree 1: x1 dx1 pulled back through the swap is x2 dx2
  CoordForm one = CoordForm::make(2, 1);
  one.coeff[0] = Expr::var(0);
  CoordForm back = pullback_form(one, swap_map);
  for (int s = 0; s < 20; ++s) {
    Vec x = c.random_point(rng);
    CHECK(back.coeff[0].eval(x) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(back.coeff[1].eval(x) == doctest::Approx(x[1]).epsilon(1e-14));
  }
}

TEST_CASE("element and arrow invariance checks agree on random forms") {
  Rng rng(3);
  FiniteActionGroupoid G = FiniteActionGroupoid::z2_inversion();
  for (int trial = 0; trial < 20; ++trial) {
    CoordForm w = CoordForm::make(2, 2);
    Expr f;
    for (int d1 = 0; d1 <= 2; ++d1)
      for (int d2 = 0; d2 + d1 <= 2; ++d2)
        f = f + Expr::number(rng.uniform(-1, 1)) * pow(Expr::var(0), d1) *
                    pow(Expr::var(1), d2);
    if (trial % 2 == 0) {
      // symmetrize: average over the group to force invariance
      std::vector<Expr> inv_map = {-Expr::var(0), -Expr::var(1)};
      f = Expr::number(0.5) * (f + f.compose(inv_map));
    }
    w.coeff[0] = f;
    bool elem = check_invariance(G, w, 1e-10, 40, rng).pass();
    bool arrow = check_invariance_arrow(G, w, 1e-10, 40, rng).pass();
    CHECK(elem == arrow);
    if (trial % 2 == 0) CHECK(elem);
  }
}

TEST_CASE("invariant function detection") {
  Rng rng(4);
  FiniteActionGroupoid G = FiniteActionGroupoid::z2_inversion();
  Expr x1 = Expr::var(0), x2 = Expr::var(1);
  CHECK(is_invariant_function(G, x1 * x1, 1e-10, 50, rng));
  CHECK(is_invariant_function(G, x1 * x2, 1e-10, 50, rng));
  CHECK(!is_invariant_function(G, x1, 1e-10, 50, rng));
  CHECK(!is_invariant_function(G, x1 * x1 * x2, 1e-10, 50, rng));
}

TEST_CASE("symplectic bracket of coordinates squared") {
  CoordForm w = CoordForm::symplectic_standard(2);
  Expr x1 = Expr::var(0), x2 = Expr::var(1);
  Expr br = symplectic_bracket(w, x1 * x1, x2 * x2);
  Rng rng(5);
  Chart c = Chart::box_chart(2, -1, 1);
  for (int s = 0; s < 30; ++s) {
    Vec x = c.random_point(rng);
    CHECK(br.eval(x) == doctest::Approx(4.0 * x[0] * x[1]).epsilon(1e-12));
  }
}

TEST_CASE("invariant bracket guards its preconditions") {
  FiniteActionGroupoid G = FiniteActionGroupoid::z2_inversion();
  CoordForm w = CoordForm::symplectic_standard(2);
  Expr x1 = Expr::var(0), x2 = Expr::var(1);

  CHECK_NOTHROW(invariant_poisson_bracket(G, w, x1 * x1, x2 * x2));
  CHECK_THROWS(invariant_poisson_bracket(G, w, x1, x2 * x2));  // x1 not invariant

  CoordForm degenerate = CoordForm::make(2, 2);  // the zero 2-form
  CHECK_THROWS(invariant_poisson_bracket(G, degenerate, x1 * x1, x2 * x2));
}

TEST_CASE("bracket of invariant functions is invariant and satisfies Jacobi") {
  Rng rng(6);
  FiniteActionGroupoid G = FiniteActionGroupoid::z2_inversion();
  CoordForm w = CoordForm::symplectic_standard(2);
  Expr x1 = Expr::var(0), x2 = Expr::var(1);
  Expr f = x1 * x1, g = x2 * x2, h = x1 * x2;

  Expr fg = invariant_poisson_bracket(G, w, f, g);
  CHECK(is_invariant_function(G, fg, 1e-9, 100, rng));

  auto sb = [&](const Expr& a, const Expr& b) {
    return invariant_poisson_bracket(G, w, a, b);
  };
  Expr jac = sb(f, sb(g, h)) + sb(g, sb(h, f)) + sb(h, sb(f, g));
  for (int s = 0; s < 100; ++s)
    CHECK(std::abs(jac.eval(G.chart().random_point(rng))) < 1e-6);
}

TEST_CASE("atlas refinement counts and presentation independence") {
  Rng rng(7);
  FiniteActionGroupoid G = FiniteActionGroupoid::z2_inversion();
  CHECK_THROWS(refine_atlas(G, 1));
  RefinedAtlas r2 = refine_atlas(G, 2);
  RefinedAtlas r3 = refine_atlas(G, 3);
  CHECK(r2.arrow_components() == 8);
  CHECK(r3.arrow_components() == 18);

  CoordForm w = CoordForm::symplectic_standard(2);
  Expr f = Expr::var(0) * Expr::var(0), g = Expr::var(1) * Expr::var(1);
  CHECK(check_presentation_independence(G, r2, w, f, g, 1e-12, 100, rng).pass());
  CHECK(check_presentation_independence(G, r3, w, f, g, 1e-12, 100, rng).pass());
}

TEST_CASE("z4 rotation leaves the standard form invariant") {
  Rng rng(8);
  FiniteActionGroupoid G = FiniteActionGroupoid::z4_rotation();
  CoordForm w = CoordForm::symplectic_standard(2);
  CHECK(check_invariance(G, w, 1e-12, 50, rng).pass());
  CHECK(check_invariance_arrow(G, w, 1e-12, 50, rng).pass());
}
