#include "apaths/path_form.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace apaths {

double PathVariation::magnitude() const {
  double m = 0.0;
  for (const auto& v : dbase) m = std::max(m, norm_inf(v));
  for (const auto& v : dfiber) m = std::max(m, norm_inf(v));
  return m;
}

double eval_path_form(const TimeGrid& grid, const PathVariation& d1,
                      const PathVariation& d2) {
  if (static_cast<int>(d1.dbase.size()) != grid.n_t ||
      static_cast<int>(d2.dbase.size()) != grid.n_t)
    throw std::invalid_argument("variation grid mismatch");
  double acc = 0.0;
  for (int k = 0; k < grid.n_t; ++k) {
    double w = trapezoid_weight(grid, k);
    acc += w * (dot(d1.dfiber[k], d2.dbase[k]) - dot(d2.dfiber[k], d1.dbase[k]));
  }
  return acc;
}

PathVariation random_variation(int dim, int rank, TimeGrid grid, Rng& rng,
                               bool zero_at_ends) {
  PathVariation v;
  v.dbase.resize(grid.n_t);
  v.dfiber.resize(grid.n_t);
  for (int k = 0; k < grid.n_t; ++k) {
    v.dbase[k] = rng.uniform_vec(dim, -1.0, 1.0);
    v.dfiber[k] = rng.uniform_vec(rank, -1.0, 1.0);
  }
  if (zero_at_ends) {
    v.dbase.front().assign(dim, 0.0);
    v.dbase.back().assign(dim, 0.0);
    v.dfiber.front().assign(rank, 0.0);
    v.dfiber.back().assign(rank, 0.0);
  }
  return v;
}

namespace {

// Embed a (q-half, p-half) variation pair into the merged concatenation grid;
// the time rescaling doubles fiber components. The junction node takes the
// q-side value.
PathVariation embed_split(const PathVariation& dq, const PathVariation& dp,
                          int n_t) {
  PathVariation out;
  out.dbase.resize(2 * n_t - 1);
  out.dfiber.resize(2 * n_t - 1);
  for (int k = 0; k < n_t; ++k) {
    out.dbase[k] = dq.dbase[k];
    out.dfiber[k] = scaled(2.0, dq.dfiber[k]);
  }
  for (int k = 1; k < n_t; ++k) {
    out.dbase[n_t - 1 + k] = dp.dbase[k];
    out.dfiber[n_t - 1 + k] = scaled(2.0, dp.dfiber[k]);
  }
  return out;
}

void zero_node(PathVariation& v, int k) {
  v.dbase[k].assign(v.dbase[k].size(), 0.0);
  v.dfiber[k].assign(v.dfiber[k].size(), 0.0);
}

double junction_pairing(const PathVariation& d1, const PathVariation& d2, int k) {
  return dot(d1.dfiber[k], d2.dbase[k]) - dot(d2.dfiber[k], d1.dbase[k]);
}

}  // namespace

CheckReport check_multiplicativity(const APath& p, const APath& q, int trials,
                                   Rng& rng) {
  CheckReport rep;
  const int n_t = p.grid.n_t;
  const int dim = p.algebroid->dim();
  const int rank = p.algebroid->rank();
  APath merged = concatenate(p, q, default_path_tol(p.grid));
  double worst = 0.0;
  for (int s = 0; s < trials; ++s) {
    PathVariation d1q = random_variation(dim, rank, p.grid, rng);
    PathVariation d1p = random_variation(dim, rank, p.grid, rng);
    PathVariation d2q = random_variation(dim, rank, p.grid, rng);
    PathVariation d2p = random_variation(dim, rank, p.grid, rng);
    // additivity is exact when the variations vanish at the junction
    zero_node(d1q, n_t - 1);
    zero_node(d2q, n_t - 1);
    zero_node(d1p, 0);
    zero_node(d2p, 0);
    PathVariation c1 = embed_split(d1q, d1p, n_t);
    PathVariation c2 = embed_split(d2q, d2p, n_t);
    double lhs = eval_path_form(merged.grid, c1, c2);
    double rhs = eval_path_form(q.grid, d1q, d2q) + eval_path_form(p.grid, d1p, d2p);
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  rep.add("multiplicativity_split_additivity", worst, 1e-12);

  // junction-straddling trial: defect bounded by the junction weight times
  // the local pairing sizes
  PathVariation d1q = random_variation(dim, rank, p.grid, rng);
  PathVariation d1p = random_variation(dim, rank, p.grid, rng);
  PathVariation d2q = random_variation(dim, rank, p.grid, rng);
  PathVariation d2p = random_variation(dim, rank, p.grid, rng);
  PathVariation c1 = embed_split(d1q, d1p, n_t);
  PathVariation c2 = embed_split(d2q, d2p, n_t);
  double lhs = eval_path_form(merged.grid, c1, c2);
  double rhs = eval_path_form(q.grid, d1q, d2q) + eval_path_form(p.grid, d1p, d2p);
  double defect = std::abs(lhs - rhs);
  double h = p.grid.h();
  double bound = 0.5 * h *
                     (std::abs(junction_pairing(d1q, d2q, n_t - 1)) +
                      std::abs(junction_pairing(d1p, d2p, 0))) +
                 1e-12;
  rep.add("multiplicativity_junction_straddle", defect, bound);
  return rep;
}

PathVariation constraint_tangent(const APath& ref,
                                 const std::vector<Vec>& dfiber,
                                 const Vec& dgamma0) {
  const Algebroid& A = *ref.algebroid;
  const TimeGrid grid = ref.grid;
  const double h = grid.h();
  PathVariation v;
  v.dfiber = dfiber;
  v.dbase.resize(grid.n_t);
  v.dbase[0] = dgamma0;
  auto rhs = [&](double t, const Vec& dg) {
    Vec x = lerp_nodes(ref.base, grid, t);
    Vec a = lerp_nodes(ref.fiber, grid, t);
    Vec da = lerp_nodes(dfiber, grid, t);
    Vec out = A.anchor_derivative_apply(x, a, dg);
    Vec rho_da = A.anchor_apply(x, da);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += rho_da[i];
    return out;
  };
  for (int k = 0; k + 1 < grid.n_t; ++k) {
    double t = grid.node(k);
    const Vec& dg = v.dbase[k];
    Vec k1 = rhs(t, dg);
    Vec k2 = rhs(t + 0.5 * h, axpy(0.5 * h, k1, dg));
    Vec k3 = rhs(t + 0.5 * h, axpy(0.5 * h, k2, dg));
    Vec k4 = rhs(t + h, axpy(h, k3, dg));
    Vec next(dg);
    for (std::size_t i = 0; i < next.size(); ++i)
      next[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    v.dbase[k + 1] = std::move(next);
  }
  return v;
}

CheckReport check_kernel_containment(const PathFamily& fam, int probes,
                                     Rng& rng) {
  CheckReport rep;
  HomotopyField field = solve_homotopy_equation(fam);
  double gate = field.max_end_norm();
  double gate_tol = default_homotopy_tol(fam.grid.n_t, fam.n_eps);
  if (gate >= gate_tol)
    throw std::invalid_argument(
        "family is not a verified homotopy: max |b(eps,1)| = " +
        std::to_string(gate));
  rep.add("kernel_homotopy_gate", gate, gate_tol);

  // foliation direction at eps = 0
  auto dbase = eps_derivative(fam.base, fam.eps_h());
  auto dfiber = eps_derivative(fam.fiber, fam.eps_h());
  PathVariation foliation{dbase[0], dfiber[0]};

  APath ref = fam.slice(0);
  const int dim = fam.algebroid->dim();
  const int rank = fam.algebroid->rank();
  double worst = 0.0;
  for (int s = 0; s < probes; ++s) {
    std::vector<Vec> da(fam.grid.n_t);
    Vec coeff0 = rng.uniform_vec(rank, -1.0, 1.0);
    Vec coeff1 = rng.uniform_vec(rank, -1.0, 1.0);
    Vec coeff2 = rng.uniform_vec(rank, -1.0, 1.0);
    for (int k = 0; k < fam.grid.n_t; ++k) {
      double t = fam.grid.node(k);
      da[k].resize(rank);
      for (int i = 0; i < rank; ++i)
        da[k][i] = coeff0[i] + coeff1[i] * std::sin(std::numbers::pi * t) +
                   coeff2[i] * std::cos(2.0 * std::numbers::pi * t);
    }
    Vec dg0 = rng.uniform_vec(dim, -1.0, 1.0);
    PathVariation probe = constraint_tangent(ref, da, dg0);
    double mag = probe.magnitude();
    if (mag > 0.0) {
      for (auto& vv : probe.dbase)
        for (double& x : vv) x /= mag;
      for (auto& vv : probe.dfiber)
        for (double& x : vv) x /= mag;
    }
    worst = std::max(worst, std::abs(eval_path_form(fam.grid, foliation, probe)));
  }
  rep.add("kernel_containment_pairing", worst,
          default_kernel_tol(fam.grid.n_t, fam.n_eps));
  return rep;
}

namespace {

Expr poisson_bracket_expr(const PoissonBivector& pi, const Expr& f,
                          const Expr& g) {
  int n = pi.chart().dim;
  Expr acc;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      Expr pij = pi.entry(i, j);
      if (pij.is_zero_literal()) continue;
      acc = acc + pij * (f.diff(i) * g.diff(j) - f.diff(j) * g.diff(i));
    }
  return acc;
}

}  // namespace

CheckReport oracle_reduced_bracket(ReducedBracketModel model,
                                   const PoissonBivector& pi, const Expr& f,
                                   const Expr& g, int samples, double tol,
                                   Rng& rng) {
  CheckReport rep;
  const int n = pi.chart().dim;
  Expr base_bracket = poisson_bracket_expr(pi, f, g);

  // groupoid-side bracket of the pullbacks f o s, g o s on the 2n-dim chart
  Expr groupoid_bracket;
  if (model == ReducedBracketModel::ZeroPoissonCotangent) {
    // T*M with the canonical form; s = bundle projection. Coordinates
    // (x_1..x_n, xi_1..xi_n); {F,G} = sum_i dF/dxi_i dG/dx_i - dF/dx_i dG/dxi_i.
    Expr acc;
    for (int i = 0; i < n; ++i)
      acc = acc + f.diff(n + i) * g.diff(i) - f.diff(i) * g.diff(n + i);
    groupoid_bracket = acc;  // identically zero for base functions
  } else {
    // pair groupoid M x M with omega (+) (-omega); s = first projection.
    // Poisson tensor is pi on the x-block and -pi on the y-block.
    std::vector<Expr> to_y(n);
    for (int i = 0; i < n; ++i) to_y[i] = Expr::var(n + i);
    Expr acc;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        Expr pij = pi.entry(i, j);
        if (pij.is_zero_literal()) continue;
        acc = acc + pij * (f.diff(i) * g.diff(j) - f.diff(j) * g.diff(i));
        Expr pij_y = pij.compose(to_y);
        acc = acc - pij_y * (f.diff(n + i) * g.diff(n + j) -
                             f.diff(n + j) * g.diff(n + i));
      }
    groupoid_bracket = acc;
  }

  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    Vec x = pi.chart().random_point(rng);
    Vec xy(2 * n);
    for (int i = 0; i < n; ++i) xy[i] = x[i];
    for (int i = 0; i < n; ++i) xy[n + i] = rng.uniform(-1.0, 1.0);
    double lhs = groupoid_bracket.eval(xy);
    double rhs = base_bracket.eval(x);  // composed with s: x-block values
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  rep.add(model == ReducedBracketModel::ZeroPoissonCotangent
              ? "reduced_bracket_zero_poisson"
              : "reduced_bracket_symplectic_pair",
          worst, tol);
  return rep;
}

std::vector<std::vector<double>> path_form_gram(int dim, TimeGrid grid) {
  const int block = dim * grid.n_t;
  const int total = 2 * block;
  auto basis = [&](int idx) {
    PathVariation v;
    v.dbase.assign(grid.n_t, Vec(dim, 0.0));
    v.dfiber.assign(grid.n_t, Vec(dim, 0.0));
    if (idx < block)
      v.dbase[idx / dim][idx % dim] = 1.0;
    else
      v.dfiber[(idx - block) / dim][(idx - block) % dim] = 1.0;
    return v;
  };
  std::vector<std::vector<double>> m(total, std::vector<double>(total, 0.0));
  for (int a = 0; a < total; ++a) {
    PathVariation va = basis(a);
    for (int b = 0; b < total; ++b)
      m[a][b] = eval_path_form(grid, va, basis(b));
  }
  return m;
}

}  // namespace apaths
