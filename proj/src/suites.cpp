#include "apaths/suites.hpp"

#include <cctype>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>

#include <json.hpp>

#include "apaths/cli.hpp"

namespace apaths {

using nlohmann::json;

namespace {

CheckReport prefixed(const std::string& prefix, CheckReport rep) {
  for (CheckResult& r : rep.records) r.name = prefix + r.name;
  return rep;
}

Vec vsub(const Vec& a, const Vec& b) { return axpy(-1.0, b, a); }

/// Subtract a multiple of the sin^2 envelope per component so the trapezoid
/// integral vanishes exactly while the endpoints stay at zero.
void zero_trapezoid_integral(std::vector<Vec>& d, TimeGrid grid) {
  int n_t = grid.n_t;
  int r = static_cast<int>(d[0].size());
  std::vector<double> env(n_t);
  double esum = 0.0;
  for (int k = 0; k < n_t; ++k) {
    double s = std::sin(std::numbers::pi * grid.node(k));
    env[k] = s * s;
    esum += trapezoid_weight(grid, k) * env[k];
  }
  for (int i = 0; i < r; ++i) {
    double integral = 0.0;
    for (int k = 0; k < n_t; ++k) integral += trapezoid_weight(grid, k) * d[k][i];
    double c = integral / esum;
    for (int k = 0; k < n_t; ++k) d[k][i] -= c * env[k];
  }
}

Expr random_affine(int dim, double scale, Rng& rng) {
  Expr e = Expr::number(rng.uniform(-scale, scale));
  for (int m = 0; m < dim; ++m)
    e = e + Expr::number(rng.uniform(-scale, scale)) * Expr::var(m);
  return e;
}

Expr random_poly2(Rng& rng) {
  Expr x1 = Expr::var(0), x2 = Expr::var(1);
  std::vector<Expr> basis = {Expr::number(1.0), x1, x2, x1 * x1, x1 * x2, x2 * x2};
  Expr p;
  for (const Expr& b : basis) p = p + Expr::number(rng.uniform(-1.0, 1.0)) * b;
  return p;
}

}  // namespace

double so3_homotopy_oracle_defect(const Algebroid& so3, int n_t, int n_eps,
                                  double amplitude, Rng& rng) {
  TimeGrid grid{n_t};
  auto f0 = random_a0_fiber_curve(so3.rank(), grid, amplitude, rng);
  auto f1 = random_a0_fiber_curve(so3.rank(), grid, amplitude, rng);

  PathFamily fam;
  fam.algebroid = &so3;
  fam.n_eps = n_eps;
  fam.grid = grid;
  fam.base.assign(n_eps, std::vector<Vec>(n_t, Vec{}));
  fam.fiber.resize(n_eps);
  for (int j = 0; j < n_eps; ++j) {
    double eps = static_cast<double>(j) / (n_eps - 1);
    fam.fiber[j].resize(n_t);
    for (int k = 0; k < n_t; ++k)
      fam.fiber[j][k] = axpy(eps, vsub(f1[k], f0[k]), f0[k]);
  }

  HomotopyField field = solve_homotopy_equation(fam);

  auto gens = so3_generators();
  std::vector<Mat> endg(n_eps);
  std::vector<std::vector<Vec>> gflat(n_eps, std::vector<Vec>(1));
  for (int j = 0; j < n_eps; ++j) {
    endg[j] = development_map(fam.slice(j), gens).g;
    gflat[j][0] = endg[j].a;
  }
  auto dg = eps_derivative(gflat, fam.eps_h());

  double defect = 0.0, scale = 0.0;
  for (int j = 0; j < n_eps; ++j) {
    Mat deriv(3);
    deriv.a = dg[j][0];
    Mat omega = deriv * endg[j].transpose();  // b = (d_eps g) g^{-1}
    Vec b_oracle = so3_coefficients(omega);
    defect = std::max(defect, norm_inf(vsub(field.b[j][n_t - 1], b_oracle)));
    scale = std::max(scale, norm_inf(b_oracle));
  }
  return defect / std::max(scale, 1e-12);
}

PathFamily so3_cotangent_homotopy_family(const Algebroid& cot, int n_t,
                                         int n_eps, Rng& rng) {
  TimeGrid grid{n_t};
  Vec x0(3);
  for (double& v : x0) v = rng.uniform(-0.7, 0.7);
  auto fib = random_a0_fiber_curve(cot.rank(), grid, 0.4, rng);
  APath p = solve_base_path(cot, x0, fib, grid);
  return reparametrization_family(p, n_eps);
}

double connection_independence_defect(int n_t, int n_eps, double gamma_scale,
                                      Rng& rng) {
  PoissonBivector pi = so3_dual_bivector();
  Algebroid cot = Algebroid::cotangent(pi);
  PathFamily fam = so3_cotangent_homotopy_family(cot, n_t, n_eps, rng);

  cot.clear_connection();
  HomotopyField flat = solve_homotopy_equation(fam);

  int n = cot.dim(), r = cot.rank();
  std::vector<std::vector<Expr>> gamma(n);
  for (int m = 0; m < n; ++m) {
    gamma[m].resize(static_cast<std::size_t>(r) * r);
    for (Expr& e : gamma[m]) e = random_affine(n, gamma_scale, rng);
  }
  cot.set_connection(std::move(gamma));
  HomotopyField curved = solve_homotopy_equation(fam);
  cot.clear_connection();

  double m = 0.0;
  for (int j = 0; j < n_eps; ++j)
    for (int k = 0; k < n_t; ++k)
      m = std::max(m, norm_inf(vsub(flat.b[j][k], curved.b[j][k])));
  return m;
}

CheckReport algebroid_check_battery(const PoissonBivector& pi, int samples,
                                    double tol, Rng& rng) {
  CheckReport rep;
  rep.merge(check_poisson_jacobi(pi, samples, tol, rng));
  Algebroid cot = Algebroid::cotangent(pi);
  rep.merge(cot.check_anchor_homomorphism(samples, tol, rng));
  rep.merge(cot.check_section_jacobi(samples, tol, rng));
  return rep;
}

PathFamily zero_poisson_exact_homotopy_family(const Algebroid& zero_cotangent,
                                              const Vec& x0, int n_t, int n_eps,
                                              Rng& rng) {
  TimeGrid grid{n_t};
  int r = zero_cotangent.rank();
  auto a0 = random_a0_fiber_curve(r, grid, 0.5, rng);
  auto dir = random_a0_fiber_curve(r, grid, 0.5, rng);
  zero_trapezoid_integral(dir, grid);

  PathFamily fam;
  fam.algebroid = &zero_cotangent;
  fam.n_eps = n_eps;
  fam.grid = grid;
  fam.base.assign(n_eps, std::vector<Vec>(n_t, x0));
  fam.fiber.resize(n_eps);
  for (int j = 0; j < n_eps; ++j) {
    double eps = static_cast<double>(j) / (n_eps - 1);
    fam.fiber[j].resize(n_t);
    for (int k = 0; k < n_t; ++k) fam.fiber[j][k] = axpy(eps, dir[k], a0[k]);
  }
  return fam;
}

CheckReport symplectic_suite_battery(int n_t, int n_eps, int trials, int probes,
                                     Rng& rng) {
  CheckReport rep;
  TimeGrid grid{n_t};

  PoissonBivector pi = so3_dual_bivector();
  Algebroid cot = Algebroid::cotangent(pi);

  Vec x0q(3);
  for (double& v : x0q) v = rng.uniform(-0.7, 0.7);
  APath q = solve_base_path(cot, x0q, random_a0_fiber_curve(3, grid, 0.4, rng), grid);
  APath p = solve_base_path(cot, path_source_target(q).second,
                            random_a0_fiber_curve(3, grid, 0.4, rng), grid);
  rep.merge(check_multiplicativity(p, q, trials, rng));

  PoissonBivector zero = PoissonBivector::zero(Chart::box_chart(2, -2.0, 2.0));
  Algebroid zcot = Algebroid::cotangent(zero);
  Vec zx0 = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
  PathFamily zfam = zero_poisson_exact_homotopy_family(zcot, zx0, n_t, n_eps, rng);
  rep.merge(prefixed("zero_poisson ", check_kernel_containment(zfam, probes, rng)));

  PathFamily sfam = so3_cotangent_homotopy_family(cot, n_t, n_eps, rng);
  rep.merge(prefixed("so3_cotangent ", check_kernel_containment(sfam, probes, rng)));

  PoissonBivector sympi(Chart::box_chart(2, -2.0, 2.0), {Expr::number(1.0)});
  double pair_defect = 0.0, zero_defect = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    Expr f = random_poly2(rng), g = random_poly2(rng);
    CheckReport r1 = oracle_reduced_bracket(ReducedBracketModel::SymplecticPair,
                                            sympi, f, g, 20, 1e-12, rng);
    pair_defect = std::max(pair_defect, r1.max_residual());
    CheckReport r2 = oracle_reduced_bracket(ReducedBracketModel::ZeroPoissonCotangent,
                                            zero, f, g, 20, 1e-15, rng);
    zero_defect = std::max(zero_defect, r2.max_residual());
  }
  rep.add("pair_groupoid reduced_bracket", pair_defect, 1e-12);
  rep.add("zero_poisson reduced_bracket", zero_defect, 1e-15);
  return rep;
}

CheckReport etale_suite_battery(int samples, Rng& rng) {
  CheckReport rep;
  FiniteActionGroupoid G = FiniteActionGroupoid::z2_inversion();
  rep.merge(prefixed("groupoid ", G.validate(samples, 1e-12, rng)));

  CoordForm w = CoordForm::symplectic_standard(2);
  rep.merge(prefixed("form ", check_invariance(G, w, 1e-12, samples, rng)));
  rep.merge(prefixed("form_arrow ", check_invariance_arrow(G, w, 1e-12, samples, rng)));

  Expr x1 = Expr::var(0), x2 = Expr::var(1);
  Expr f = x1 * x1, g = x2 * x2, h = x1 * x2;

  Expr br = invariant_poisson_bracket(G, w, f, g);
  double inv_defect = 0.0;
  for (int s = 0; s < samples; ++s) {
    Vec x = G.chart().random_point(rng);
    Vec gx(2);
    for (int c = 0; c < 2; ++c) gx[c] = G.action(1)[c].eval(x);
    inv_defect = std::max(inv_defect, std::abs(br.eval(gx) - br.eval(x)));
  }
  rep.add("bracket_invariance", inv_defect, 1e-9);

  auto sb = [&](const Expr& a, const Expr& b) {
    return invariant_poisson_bracket(G, w, a, b);
  };
  Expr jac = sb(f, sb(g, h)) + sb(g, sb(h, f)) + sb(h, sb(f, g));
  double jac_defect = 0.0;
  for (int s = 0; s < samples; ++s)
    jac_defect = std::max(jac_defect,
                          std::abs(jac.eval(G.chart().random_point(rng))));
  rep.add("bracket_jacobi", jac_defect, 1e-6);

  rep.merge(prefixed("refine2 ",
                     check_presentation_independence(G, refine_atlas(G, 2), w, f,
                                                     g, 1e-12, samples, rng)));
  rep.merge(prefixed("refine3 ",
                     check_presentation_independence(G, refine_atlas(G, 3), w, f,
                                                     g, 1e-12, samples, rng)));
  return rep;
}

json path_to_json(const APath& p) {
  json doc;
  doc["grid"] = {{"n_t", p.grid.n_t}};
  doc["base"] = p.base;
  doc["fiber"] = p.fiber;
  return doc;
}

namespace {

std::vector<Vec> fiber_nodes(const PathSpec& spec, TimeGrid grid) {
  std::vector<Expr> exprs;
  for (const std::string& s : spec.fiber)
    exprs.push_back(parse_expr(rewrite_time_var(s), 1));
  std::vector<Vec> nodes(grid.n_t, Vec(exprs.size()));
  for (int k = 0; k < grid.n_t; ++k) {
    Vec t = {grid.node(k)};
    for (std::size_t i = 0; i < exprs.size(); ++i) nodes[k][i] = exprs[i].eval(t);
  }
  return nodes;
}

void add_error(CheckReport& rep, const std::string& stage, const std::exception& e) {
  rep.add(stage + ": " + e.what(), std::numeric_limits<double>::infinity(), 0.0);
}

void run_check_algebroid(const RunConfig& cfg, CheckReport& checks, Rng& rng) {
  if (cfg.poisson)
    checks.merge(algebroid_check_battery(*cfg.poisson, 100, cfg.tol, rng));
  if (cfg.lie_constants) {
    try {
      Algebroid a = Algebroid::lie_algebra(cfg.lie_rank, *cfg.lie_constants);
      checks.merge(prefixed("lie ", a.check_anchor_homomorphism(100, cfg.tol, rng)));
      checks.merge(prefixed("lie ", a.check_section_jacobi(100, cfg.tol, rng)));
    } catch (const std::exception& e) {
      add_error(checks, "lie_algebra", e);
    }
  }
}

void run_integrate_path(const RunConfig& cfg, CheckReport& checks) {
  Algebroid cot = Algebroid::cotangent(*cfg.poisson);
  TimeGrid grid{cfg.n_t};
  try {
    APath p = solve_base_path(cot, cfg.path->x0, fiber_nodes(*cfg.path, grid), grid);
    PathValidation v = validate_apath(p);
    checks.add("apath_residual", v.apath_residual, default_path_tol(grid));
    if (!cfg.path_out.empty()) {
      std::ofstream out(cfg.path_out);
      out << path_to_json(p).dump(2) << "\n";
    }
  } catch (const std::exception& e) {
    add_error(checks, "base_integration", e);
  }
}

void run_homotopy(const RunConfig& cfg, CheckReport& checks) {
  Algebroid cot = Algebroid::cotangent(*cfg.poisson);
  TimeGrid grid{cfg.n_t};
  try {
    APath p = solve_base_path(cot, cfg.path->x0, fiber_nodes(*cfg.path, grid), grid);
    PathFamily fam;
    if (cfg.family_kind == "linear") {
      APath q = solve_base_path(cot, cfg.path_b->x0, fiber_nodes(*cfg.path_b, grid), grid);
      fam = linear_family(p, q, cfg.n_eps);
    } else {
      fam = reparametrization_family(p, cfg.n_eps);
    }
    double tol = cfg.tol_set ? cfg.tol : default_homotopy_tol(cfg.n_t, cfg.n_eps);
    HomotopyDecision dec = is_homotopic_along_family(fam, tol);
    checks.add("endpoint_defect", dec.max_end_defect, dec.tol);
  } catch (const std::exception& e) {
    add_error(checks, "homotopy", e);
  }
}

void run_oracle_suite(const RunConfig& cfg, CheckReport& checks, Rng& rng) {
  TimeGrid grid{cfg.n_t};
  try {
    Algebroid zc = Algebroid::cotangent(*cfg.poisson);
    checks.merge(prefixed("zero_poisson ",
                          check_oracle_functoriality(zc, OracleFamily::ZeroPoisson,
                                                     20, grid, rng)));
  } catch (const std::exception& e) {
    add_error(checks, "zero_poisson", e);
  }
  Algebroid so3 = Algebroid::lie_algebra(3, so3_structure_constants());
  checks.merge(prefixed("development ",
                        check_oracle_functoriality(so3, OracleFamily::Development,
                                                   20, grid, rng)));
  PoissonBivector sympi(Chart::box_chart(2, -2.0, 2.0), {Expr::number(1.0)});
  Algebroid pc = Algebroid::cotangent(sympi);
  checks.merge(prefixed("pair ",
                        check_oracle_functoriality(pc, OracleFamily::PairGroupoid,
                                                   20, grid, rng)));
}

void run_etale_suite(const RunConfig& cfg, CheckReport& checks, Rng& rng) {
  const std::string& name = cfg.groupoid_name;
  if (name.empty() || name == "z2_inversion") {
    checks.merge(etale_suite_battery(100, rng));
    return;
  }
  FiniteActionGroupoid G = name == "z4_rotation"
                               ? FiniteActionGroupoid::z4_rotation()
                               : FiniteActionGroupoid::trivial();
  checks.merge(prefixed("groupoid ", G.validate(100, 1e-12, rng)));
  CoordForm w = CoordForm::symplectic_standard(2);
  checks.merge(prefixed("form ", check_invariance(G, w, 1e-12, 100, rng)));
}

void run_convergence(const RunConfig& cfg, CheckReport& checks) {
  std::vector<int> nts = cfg.nt_list;
  if (nts.empty()) nts = {33, 65, 129, 257};
  Algebroid so3 = Algebroid::lie_algebra(3, so3_structure_constants());
  std::vector<ConvergenceRow> rows;
  for (int n : nts) {
    Rng row_rng(cfg.seed);  // same smooth family on every grid
    double d = so3_homotopy_oracle_defect(so3, n, cfg.n_eps, 0.5, row_rng);
    rows.push_back({n, d});
    checks.add("defect(n_t=" + std::to_string(n) + ")", d, 1e-2);
  }
  if (!cfg.csv_path.empty()) emit_convergence_table(rows, cfg.csv_path);
}

}  // namespace

Report run_suite(const RunConfig& cfg) {
  auto t0 = std::chrono::steady_clock::now();
  Report rep;
  rep.seed = cfg.seed;
  rep.config_echo = cfg.config_echo;

  Rng rng(cfg.seed);
  CheckReport checks;
  try {
    switch (cfg.task) {
      case Task::CheckAlgebroid: run_check_algebroid(cfg, checks, rng); break;
      case Task::IntegratePath: run_integrate_path(cfg, checks); break;
      case Task::Homotopy: run_homotopy(cfg, checks); break;
      case Task::OracleSuite: run_oracle_suite(cfg, checks, rng); break;
      case Task::SymplecticSuite:
        checks.merge(symplectic_suite_battery(cfg.n_t, cfg.n_eps, 100, 50, rng));
        break;
      case Task::EtaleSuite: run_etale_suite(cfg, checks, rng); break;
      case Task::Convergence: run_convergence(cfg, checks); break;
    }
  } catch (const std::exception& e) {
    add_error(checks, "suite", e);
  }

  rep.records = checks.records;
  rep.pass = checks.pass();
  rep.wall_ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
  return rep;
}

}  // namespace apaths
