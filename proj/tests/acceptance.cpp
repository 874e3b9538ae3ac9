// Acceptance gate: one line per criterion, exit status = number of failures.
// Tolerances are pinned here, not read from configuration.

#include <cmath>
#include <cstdio>
#include <string>

#include "apaths/cli.hpp"
#include "apaths/suites.hpp"

using namespace apaths;

namespace {

int failures = 0;

void verdict(int n, bool pass, const std::string& what, const std::string& detail) {
  std::printf("%s criterion %d: %s (%s)\n", pass ? "PASS" : "FAIL", n,
              what.c_str(), detail.c_str());
  if (!pass) ++failures;
}

double record_residual(const CheckReport& rep, const std::string& name) {
  for (const CheckResult& r : rep.records)
    if (r.name == name) return r.residual;
  return std::numeric_limits<double>::infinity();
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

// 1. Solver field b(eps,1) against the finite-difference logarithmic
//    derivative of the development endpoint, plus t-convergence order.
void criterion_1() {
  Algebroid so3 = Algebroid::lie_algebra(3, so3_structure_constants());
  Rng rng(kDefaultSeed);
  double worst = 0.0;
  for (int s = 0; s < 50; ++s)
    worst = std::max(worst, so3_homotopy_oracle_defect(so3, 129, 129, 0.5, rng));
  bool pass_a = worst < 1e-4;

  // factor >= 8 per halving of h_t, with n_eps fixed fine enough that the
  // eps-difference floor sits below the measured range
  double d9, d17, d33;
  {
    Rng r(kDefaultSeed);
    d9 = so3_homotopy_oracle_defect(so3, 9, 2049, 0.5, r);
  }
  {
    Rng r(kDefaultSeed);
    d17 = so3_homotopy_oracle_defect(so3, 17, 2049, 0.5, r);
  }
  {
    Rng r(kDefaultSeed);
    d33 = so3_homotopy_oracle_defect(so3, 33, 2049, 0.5, r);
  }
  bool pass_b = d9 / d17 >= 8.0 && d17 / d33 >= 8.0;

  verdict(1, pass_a && pass_b, "homotopy field matches the development oracle",
          "max rel defect " + fmt(worst) + " < 1e-4 on 50 families at 129x129; "
          "halving factors " + fmt(d9 / d17) + ", " + fmt(d17 / d33) + " >= 8");
}

// 2. The homotopy field does not depend on the connection choice.
void criterion_2() {
  Rng rng(kDefaultSeed);
  double worst = 0.0;
  for (int s = 0; s < 20; ++s)
    worst = std::max(worst, connection_independence_defect(129, 129, 0.3, rng));
  verdict(2, worst < 1e-4, "zero vs random polynomial Christoffels",
          "max |b| deviation " + fmt(worst) + " < 1e-4 on 20 families");
}

// 3. Zero-Poisson groupoid: class laws and decision agreement.
void criterion_3() {
  Rng rng(kDefaultSeed);
  PoissonBivector zero = PoissonBivector::zero(Chart::box_chart(2, -2, 2));
  Algebroid zcot = Algebroid::cotangent(zero);
  CheckReport rep = check_oracle_functoriality(zcot, OracleFamily::ZeroPoisson,
                                               100, TimeGrid{65}, rng);
  double laws = record_residual(rep, "zero_poisson_class_laws");
  double disagreements = record_residual(rep, "zero_poisson_homotopy_agreement");
  verdict(3, laws < 1e-6 && disagreements == 0.0,
          "zero-Poisson classes (base point, integral)",
          "class-law defect " + fmt(laws) + " < 1e-6; decision disagreements " +
              fmt(disagreements) + " of 100 pairs");
}

// 4. Reduced bracket through the oracle source maps.
void criterion_4() {
  Rng rng(kDefaultSeed);
  PoissonBivector sym(Chart::box_chart(2, -2, 2), {Expr::number(1.0)});
  PoissonBivector zero = PoissonBivector::zero(Chart::box_chart(2, -2, 2));
  double pair_defect = 0.0, zero_defect = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    Expr f, g;
    for (int d1 = 0; d1 <= 2; ++d1)
      for (int d2 = 0; d2 + d1 <= 2; ++d2) {
        Expr mono = pow(Expr::var(0), d1) * pow(Expr::var(1), d2);
        f = f + Expr::number(rng.uniform(-1, 1)) * mono;
        g = g + Expr::number(rng.uniform(-1, 1)) * mono;
      }
    pair_defect = std::max(
        pair_defect, oracle_reduced_bracket(ReducedBracketModel::SymplecticPair,
                                            sym, f, g, 20, 1e-12, rng)
                         .max_residual());
    zero_defect = std::max(
        zero_defect,
        oracle_reduced_bracket(ReducedBracketModel::ZeroPoissonCotangent, zero,
                               f, g, 20, 1e-15, rng)
            .max_residual());
  }
  verdict(4, pair_defect < 1e-12 && zero_defect == 0.0,
          "source map is Poisson on the oracle groupoids",
          "pair-groupoid defect " + fmt(pair_defect) +
              " < 1e-12 on 10 polynomial pairs; zero-Poisson defect " +
              fmt(zero_defect) + " (identically 0)");
}

// 5. The path-space form adds under concatenation.
void criterion_5() {
  Rng rng(kDefaultSeed);
  PoissonBivector pi = so3_dual_bivector();
  Algebroid cot = Algebroid::cotangent(pi);
  TimeGrid grid{65};
  APath q = solve_base_path(cot, {0.4, 0.0, 0.2},
                            random_a0_fiber_curve(3, grid, 0.4, rng), grid);
  APath p = solve_base_path(cot, path_source_target(q).second,
                            random_a0_fiber_curve(3, grid, 0.4, rng), grid);
  CheckReport rep = check_multiplicativity(p, q, 100, rng);
  double split = record_residual(rep, "multiplicativity_split_additivity");
  double straddle = record_residual(rep, "multiplicativity_junction_straddle");
  verdict(5, split < 1e-12 && rep.pass(),
          "form multiplicativity under concatenation",
          "split additivity " + fmt(split) +
              " < 1e-12 over 100 trials; junction straddle " + fmt(straddle) +
              " within the h-weighted bound");
}

// 6. Foliation directions of verified homotopy families pair to ~0.
void criterion_6() {
  Rng rng(kDefaultSeed);
  const int n_t = 129, n_eps = 129, probes = 50;
  double tol_grid = default_kernel_tol(n_t, n_eps);  // 100 (h^2 + h_eps^2)

  PoissonBivector zero = PoissonBivector::zero(Chart::box_chart(2, -2, 2));
  Algebroid zcot = Algebroid::cotangent(zero);
  PathFamily zfam =
      zero_poisson_exact_homotopy_family(zcot, {0.1, 0.3}, n_t, n_eps, rng);
  double zres = record_residual(check_kernel_containment(zfam, probes, rng),
                                "kernel_containment_pairing");

  PoissonBivector pi = so3_dual_bivector();
  Algebroid cot = Algebroid::cotangent(pi);
  PathFamily sfam = so3_cotangent_homotopy_family(cot, n_t, n_eps, rng);
  double sres = record_residual(check_kernel_containment(sfam, probes, rng),
                                "kernel_containment_pairing");

  verdict(6, zres < 1e-10 && sres < tol_grid, "kernel containment of the form",
          "zero-Poisson pairing " + fmt(zres) +
              " < 1e-10; so(3)*-cotangent pairing " + fmt(sres) + " < " +
              fmt(tol_grid) + " at 129x129, 50 probes each");
}

// 7. Finite etale model: bracket invariance, Jacobi, refinement independence.
void criterion_7() {
  Rng rng(kDefaultSeed);
  CheckReport rep = etale_suite_battery(100, rng);
  double inv = record_residual(rep, "bracket_invariance");
  double jac = record_residual(rep, "bracket_jacobi");
  double r2 = record_residual(rep, "refine2 presentation_independence");
  double r3 = record_residual(rep, "refine3 presentation_independence");
  verdict(7, inv < 1e-9 && jac < 1e-6 && r2 < 1e-12 && r3 < 1e-12,
          "invariant bracket on the Z/2-inversion model",
          "invariance " + fmt(inv) + " < 1e-9; Jacobi " + fmt(jac) +
              " < 1e-6 at 100 points; refinements " + fmt(r2) + ", " + fmt(r3) +
              " < 1e-12");
}

// 8. Axiom checkers on the shipped bivectors.
void criterion_8() {
  Rng rng(kDefaultSeed);
  bool good_pass = true;
  for (const PoissonBivector& pi :
       {so3_dual_bivector(), PoissonBivector::zero(Chart::box_chart(3, -2, 2)),
        PoissonBivector(Chart::box_chart(2, -2, 2), {Expr::number(1.0)})}) {
    Algebroid cot = Algebroid::cotangent(pi);
    good_pass = good_pass && cot.check_anchor_homomorphism(100, 1e-6, rng).pass() &&
                cot.check_section_jacobi(100, 1e-6, rng).pass();
  }
  PoissonBivector bad = non_jacobi_bivector();
  double at_pole = std::abs(bad.jacobiator_at(Vec{0.0, 0.0, 1.0}));
  bool bad_flagged = at_pole >= 0.5 && !check_poisson_jacobi(bad, 100, 1e-6, rng).pass();
  verdict(8, good_pass && bad_flagged, "algebroid axiom checkers",
          "all Jacobi bivectors green at 1e-6 / 100 samples; non-Jacobi "
          "example flagged with residual " + fmt(at_pole) + " >= 0.5 at (0,0,1)");
}

// 9. Byte-identical reports modulo timing.
void criterion_9() {
  const char* so3cfg = R"({"dim": 3, "box": [-2, 2], "poisson": [
      {"i": 1, "j": 2, "expr": "x3"},
      {"i": 1, "j": 3, "expr": "-x2"},
      {"i": 2, "j": 3, "expr": "x1"}]})";
  const char* zcfg = R"({"dim": 2, "poisson": [], "n_t": 65})";
  const char* ecfg = R"({"dim": 2})";
  const char* scfg = R"({"dim": 3, "n_t": 65, "n_eps": 33})";

  bool identical = true;
  auto both = [&](const char* text, Task task) {
    RunConfig cfg = load_config(text, task);
    Report a = run_suite(cfg);
    Report b = run_suite(cfg);
    a.wall_ms = 0.0;
    b.wall_ms = 0.0;
    identical = identical && a.to_json().dump() == b.to_json().dump();
  };
  both(so3cfg, Task::CheckAlgebroid);
  both(zcfg, Task::OracleSuite);
  both(ecfg, Task::EtaleSuite);
  both(scfg, Task::SymplecticSuite);
  verdict(9, identical, "deterministic reports",
          "4 tasks run twice at the default seed, byte-identical modulo wall_ms");
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  std::printf("%s: %d of 9 criteria failed\n", failures == 0 ? "OK" : "FAILED",
              failures);
  return failures;
}
