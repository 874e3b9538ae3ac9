#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "apaths/homotopy.hpp"
#include "apaths/suites.hpp"

using namespace apaths;

namespace {

void check_bit_identical(const PathFamily& fam) {
  HomotopyField a = solve_homotopy_equation(fam);
  HomotopyField b = solve_homotopy_equation_serial(fam);
  REQUIRE(a.n_eps == b.n_eps);
  for (int j = 0; j < a.n_eps; ++j)
    for (int k = 0; k < a.grid.n_t; ++k)
      for (std::size_t i = 0; i < a.b[j][k].size(); ++i)
        CHECK(a.b[j][k][i] == b.b[j][k][i]);  // bitwise
}

}  // namespace

TEST_CASE("parallel kernel matches the serial reference bitwise: so(3)* family") {
  Rng rng(kDefaultSeed);
  PoissonBivector pi = so3_dual_bivector();
  Algebroid cot = Algebroid::cotangent(pi);
  check_bit_identical(so3_cotangent_homotopy_family(cot, 65, 33, rng));
}

TEST_CASE("parallel kernel matches the serial reference bitwise: linear family") {
  Rng rng(7);
  PoissonBivector zero = PoissonBivector::zero(Chart::box_chart(2, -2, 2));
  Algebroid zcot = Algebroid::cotangent(zero);
  check_bit_identical(zero_poisson_exact_homotopy_family(zcot, {0.2, -0.1}, 65, 33, rng));
}

TEST_CASE("parallel kernel with connection terms") {
  Rng rng(9);
  PoissonBivector pi = so3_dual_bivector();
  Algebroid cot = Algebroid::cotangent(pi);
  std::vector<std::vector<Expr>> gamma(3);
  for (int m = 0; m < 3; ++m) {
    gamma[m].resize(9);
    for (Expr& e : gamma[m]) e = Expr::number(rng.uniform(-0.3, 0.3));
  }
  cot.set_connection(gamma);
  check_bit_identical(so3_cotangent_homotopy_family(cot, 33, 17, rng));
}

TEST_CASE("repeated runs are deterministic") {
  Rng rng1(kDefaultSeed), rng2(kDefaultSeed);
  PoissonBivector pi = so3_dual_bivector();
  Algebroid cot = Algebroid::cotangent(pi);
  PathFamily f1 = so3_cotangent_homotopy_family(cot, 33, 17, rng1);
  PathFamily f2 = so3_cotangent_homotopy_family(cot, 33, 17, rng2);
  HomotopyField a = solve_homotopy_equation(f1);
  HomotopyField b = solve_homotopy_equation(f2);
  for (int j = 0; j < a.n_eps; ++j)
    for (int k = 0; k < a.grid.n_t; ++k)
      CHECK(norm_inf(axpy(-1.0, b.b[j][k], a.b[j][k])) == 0.0);
}
