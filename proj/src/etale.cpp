#include "apaths/etale.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace apaths {

// --------------------------------------------------------------------------
// FiniteActionGroupoid
// --------------------------------------------------------------------------

FiniteActionGroupoid::FiniteActionGroupoid(Chart chart,
                                           std::vector<std::vector<int>> mult,
                                           std::vector<std::vector<Expr>> action)
    : chart_(std::move(chart)), mult_(std::move(mult)), action_(std::move(action)) {
  const int n = static_cast<int>(mult_.size());
  if (static_cast<int>(action_.size()) != n)
    throw std::invalid_argument("one action map per group element required");
  for (const auto& row : mult_)
    if (static_cast<int>(row.size()) != n)
      throw std::invalid_argument("multiplication table must be square");
  for (const auto& a : action_)
    if (static_cast<int>(a.size()) != chart_.dim)
      throw std::invalid_argument("action must supply dim coordinate expressions");
  identity_ = -1;
  for (int e = 0; e < n; ++e) {
    bool ok = true;
    for (int h = 0; h < n; ++h)
      if (mult_[e][h] != h || mult_[h][e] != h) ok = false;
    if (ok) {
      identity_ = e;
      break;
    }
  }
  if (identity_ < 0)
    throw std::invalid_argument("multiplication table has no identity element");
}

CheckReport FiniteActionGroupoid::validate(int samples, double tol,
                                           Rng& rng) const {
  CheckReport rep;
  double worst_id = 0.0;
  for (int s = 0; s < samples; ++s) {
    Vec x = chart_.random_point(rng);
    for (int i = 0; i < chart_.dim; ++i)
      worst_id = std::max(worst_id,
                          std::abs(action_[identity_][i].eval(x) - x[i]));
  }
  rep.add("identity_action", worst_id, tol);

  double worst_comp = 0.0;
  for (int g = 0; g < order(); ++g)
    for (int h = 0; h < order(); ++h) {
      std::vector<Expr> composed(chart_.dim);
      for (int i = 0; i < chart_.dim; ++i)
        composed[i] = action_[g][i].compose(action_[h]);
      const auto& expected = action_[mult_[g][h]];
      for (int s = 0; s < samples; ++s) {
        Vec x = chart_.random_point(rng);
        for (int i = 0; i < chart_.dim; ++i)
          worst_comp = std::max(
              worst_comp, std::abs(composed[i].eval(x) - expected[i].eval(x)));
      }
    }
  rep.add("action_composition", worst_comp, tol);
  return rep;
}

FiniteActionGroupoid FiniteActionGroupoid::z2_inversion(double box_half_width) {
  Chart chart = Chart::box_chart(2, -box_half_width, box_half_width);
  std::vector<std::vector<Expr>> action = {
      {Expr::var(0), Expr::var(1)},
      {-Expr::var(0), -Expr::var(1)},
  };
  return FiniteActionGroupoid(chart, {{0, 1}, {1, 0}}, std::move(action));
}

FiniteActionGroupoid FiniteActionGroupoid::z4_rotation(double box_half_width) {
  Chart chart = Chart::box_chart(2, -box_half_width, box_half_width);
  Expr x = Expr::var(0), y = Expr::var(1);
  std::vector<std::vector<Expr>> action = {
      {x, y}, {-y, x}, {-x, -y}, {y, -x}};
  std::vector<std::vector<int>> mult(4, std::vector<int>(4));
  for (int g = 0; g < 4; ++g)
    for (int h = 0; h < 4; ++h) mult[g][h] = (g + h) % 4;
  return FiniteActionGroupoid(chart, std::move(mult), std::move(action));
}

FiniteActionGroupoid FiniteActionGroupoid::trivial(double box_half_width) {
  Chart chart = Chart::box_chart(2, -box_half_width, box_half_width);
  return FiniteActionGroupoid(chart, {{0}}, {{Expr::var(0), Expr::var(1)}});
}

// --------------------------------------------------------------------------
// CoordForm
// --------------------------------------------------------------------------

std::vector<std::vector<int>> CoordForm::index_tuples(int dim, int degree) {
  std::vector<std::vector<int>> out;
  std::vector<int> tuple(degree);
  // lexicographic enumeration of sorted tuples
  auto rec = [&](auto&& self, int pos, int start) -> void {
    if (pos == degree) {
      out.push_back(tuple);
      return;
    }
    for (int i = start; i < dim; ++i) {
      tuple[pos] = i;
      self(self, pos + 1, i + 1);
    }
  };
  rec(rec, 0, 0);
  return out;
}

CoordForm CoordForm::make(int dim, int degree) {
  CoordForm w;
  w.dim = dim;
  w.degree = degree;
  w.coeff.assign(index_tuples(dim, degree).size(), Expr());
  return w;
}

CoordForm CoordForm::symplectic_standard(int dim) {
  if (dim % 2 != 0)
    throw std::invalid_argument("standard symplectic form needs even dim");
  CoordForm w = make(dim, 2);
  auto tuples = index_tuples(dim, 2);
  for (std::size_t t = 0; t < tuples.size(); ++t)
    if (tuples[t][0] % 2 == 0 && tuples[t][1] == tuples[t][0] + 1)
      w.coeff[t] = Expr::number(1.0);
  return w;
}

namespace {

// Determinant of a k x k matrix of expressions by permutation expansion
// (k is the form degree, always small here).
Expr minor_determinant(const std::vector<std::vector<Expr>>& m) {
  const int k = static_cast<int>(m.size());
  if (k == 0) return Expr::number(1.0);
  if (k == 1) return m[0][0];
  if (k == 2) return m[0][0] * m[1][1] - m[0][1] * m[1][0];
  std::vector<int> perm(k);
  for (int i = 0; i < k; ++i) perm[i] = i;
  Expr acc;
  do {
    int inversions = 0;
    for (int i = 0; i < k; ++i)
      for (int j = i + 1; j < k; ++j)
        if (perm[i] > perm[j]) ++inversions;
    Expr term = m[0][perm[0]];
    for (int i = 1; i < k; ++i) term = term * m[i][perm[i]];
    acc = (inversions % 2 == 0) ? acc + term : acc - term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return acc;
}

}  // namespace

CoordForm pullback_form(const CoordForm& w, const std::vector<Expr>& map) {
  if (static_cast<int>(map.size()) != w.dim)
    throw std::invalid_argument("map dimension must match the form's chart");
  auto tuples = CoordForm::index_tuples(w.dim, w.degree);
  // Jacobian d map_i / d y_j as expressions
  std::vector<std::vector<Expr>> jac(w.dim, std::vector<Expr>(w.dim));
  for (int i = 0; i < w.dim; ++i)
    for (int j = 0; j < w.dim; ++j) jac[i][j] = map[i].diff(j);
  CoordForm out = CoordForm::make(w.dim, w.degree);
  for (std::size_t tj = 0; tj < tuples.size(); ++tj) {
    const auto& J = tuples[tj];
    Expr acc;
    for (std::size_t ti = 0; ti < tuples.size(); ++ti) {
      const auto& I = tuples[ti];
      if (w.coeff[ti].is_zero_literal()) continue;
      std::vector<std::vector<Expr>> minor(w.degree,
                                           std::vector<Expr>(w.degree));
      for (int a = 0; a < w.degree; ++a)
        for (int b = 0; b < w.degree; ++b) minor[a][b] = jac[I[a]][J[b]];
      acc = acc + w.coeff[ti].compose(map) * minor_determinant(minor);
    }
    out.coeff[tj] = acc;
  }
  return out;
}

CheckReport check_invariance(const FiniteActionGroupoid& G, const CoordForm& w,
                             double tol, int samples, Rng& rng) {
  CheckReport rep;
  double worst = 0.0;
  for (int g = 0; g < G.order(); ++g) {
    if (g == G.identity()) continue;
    CoordForm pulled = pullback_form(w, G.action(g));
    for (int s = 0; s < samples; ++s) {
      Vec x = G.chart().random_point(rng);
      for (int c = 0; c < w.coeff_count(); ++c)
        worst = std::max(worst,
                         std::abs(pulled.coeff[c].eval(x) - w.coeff[c].eval(x)));
    }
  }
  rep.add("form_invariance", worst, tol);
  return rep;
}

CheckReport check_invariance_arrow(const FiniteActionGroupoid& G,
                                   const CoordForm& w, double tol, int samples,
                                   Rng& rng) {
  CheckReport rep;
  // arrow space of the action groupoid: one chart copy per group element,
  // s the identity chart map and t the action
  std::vector<Expr> ident(G.chart().dim);
  for (int i = 0; i < G.chart().dim; ++i) ident[i] = Expr::var(i);
  double worst = 0.0;
  for (int g = 0; g < G.order(); ++g) {
    CoordForm s_pull = pullback_form(w, ident);
    CoordForm t_pull = pullback_form(w, G.action(g));
    for (int s = 0; s < samples; ++s) {
      Vec x = G.chart().random_point(rng);
      for (int c = 0; c < w.coeff_count(); ++c)
        worst = std::max(
            worst, std::abs(s_pull.coeff[c].eval(x) - t_pull.coeff[c].eval(x)));
    }
  }
  rep.add("form_invariance_arrow", worst, tol);
  return rep;
}

bool is_invariant_function(const FiniteActionGroupoid& G, const Expr& f,
                           double tol, int samples, Rng& rng) {
  for (int g = 0; g < G.order(); ++g) {
    if (g == G.identity()) continue;
    Expr pulled = f.compose(G.action(g));
    for (int s = 0; s < samples; ++s) {
      Vec x = G.chart().random_point(rng);
      if (std::abs(pulled.eval(x) - f.eval(x)) > tol) return false;
    }
  }
  return true;
}

namespace {

Expr matrix_determinant(const std::vector<std::vector<Expr>>& m) {
  return minor_determinant(m);
}

std::vector<std::vector<Expr>> submatrix(const std::vector<std::vector<Expr>>& m,
                                         int drop_row, int drop_col) {
  std::vector<std::vector<Expr>> out;
  for (int i = 0; i < static_cast<int>(m.size()); ++i) {
    if (i == drop_row) continue;
    std::vector<Expr> row;
    for (int j = 0; j < static_cast<int>(m.size()); ++j) {
      if (j == drop_col) continue;
      row.push_back(m[i][j]);
    }
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace

Expr symplectic_bracket(const CoordForm& w, const Expr& f, const Expr& g) {
  if (w.degree != 2)
    throw std::invalid_argument("symplectic bracket needs a 2-form");
  const int n = w.dim;
  if (n > 4)
    throw std::invalid_argument("symbolic inverse supported up to dim 4");
  // full antisymmetric coefficient matrix
  auto tuples = CoordForm::index_tuples(n, 2);
  std::vector<std::vector<Expr>> W(n, std::vector<Expr>(n));
  for (std::size_t t = 0; t < tuples.size(); ++t) {
    W[tuples[t][0]][tuples[t][1]] = w.coeff[t];
    W[tuples[t][1]][tuples[t][0]] = -w.coeff[t];
  }
  Expr det = matrix_determinant(W);
  // Poisson tensor P = -W^{-1}; with the adjugate, P_ij = -cof_ji / det.
  Expr acc;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      Expr cof = matrix_determinant(submatrix(W, j, i));
      if ((i + j) % 2 != 0) cof = -cof;
      Expr pij = -(cof / det);
      acc = acc + pij * f.diff(i) * g.diff(j);
    }
  return acc;
}

Expr invariant_poisson_bracket(const FiniteActionGroupoid& G, const CoordForm& w,
                               const Expr& f, const Expr& g) {
  Rng rng(kDefaultSeed);
  if (!is_invariant_function(G, f, 1e-9, 50, rng) ||
      !is_invariant_function(G, g, 1e-9, 50, rng))
    throw std::invalid_argument("bracket arguments must be invariant functions");
  CheckReport inv = check_invariance(G, w, 1e-9, 50, rng);
  if (!inv.pass())
    throw std::invalid_argument("symplectic form must be invariant");
  Expr bracket = symplectic_bracket(w, f, g);
  // nondegeneracy probe: the bracket must evaluate finitely at samples
  for (int s = 0; s < 20; ++s) {
    Vec x = G.chart().random_point(rng);
    (void)bracket.eval(x);  // throws EvalError when w degenerates
  }
  return bracket;
}

RefinedAtlas refine_atlas(const FiniteActionGroupoid& G, int copies) {
  if (copies < 2) throw std::invalid_argument("refinement needs >= 2 copies");
  return RefinedAtlas{&G, copies};
}

CheckReport check_presentation_independence(const FiniteActionGroupoid& G,
                                            const RefinedAtlas& R,
                                            const CoordForm& w, const Expr& f,
                                            const Expr& g, double tol,
                                            int samples, Rng& rng) {
  CheckReport rep;
  Expr reference = invariant_poisson_bracket(G, w, f, g);
  // the refinement morphism is the identity chart map on every copy
  std::vector<Expr> ident(G.chart().dim);
  for (int i = 0; i < G.chart().dim; ++i) ident[i] = Expr::var(i);
  double worst = 0.0;
  for (int copy = 0; copy < R.copies; ++copy) {
    CoordForm w_copy = pullback_form(w, ident);
    Expr f_copy = f.compose(ident);
    Expr g_copy = g.compose(ident);
    Expr bracket_copy = symplectic_bracket(w_copy, f_copy, g_copy);
    for (int s = 0; s < samples; ++s) {
      Vec x = G.chart().random_point(rng);
      worst = std::max(worst,
                       std::abs(bracket_copy.eval(x) - reference.eval(x)));
    }
  }
  rep.add("presentation_independence", worst, tol);
  return rep;
}

}  // namespace apaths
