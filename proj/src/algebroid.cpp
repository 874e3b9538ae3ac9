#include "apaths/algebroid.hpp"

#include <cmath>
#include <stdexcept>

namespace apaths {

// --------------------------------------------------------------------------
// Chart
// --------------------------------------------------------------------------

Chart Chart::box_chart(int dim, double lo, double hi) {
  if (dim < 0 || (dim > 0 && lo >= hi))
    throw std::invalid_argument("chart bounds must satisfy lower < upper");
  Chart c;
  c.dim = dim;
  c.box.assign(dim, {lo, hi});
  return c;
}

bool Chart::contains(std::span<const double> p) const {
  if (static_cast<int>(p.size()) != dim) return false;
  for (int i = 0; i < dim; ++i)
    if (p[i] < box[i][0] || p[i] > box[i][1]) return false;
  return true;
}

Vec Chart::random_point(Rng& rng) const {
  Vec p(dim);
  for (int i = 0; i < dim; ++i) p[i] = rng.uniform(box[i][0], box[i][1]);
  return p;
}

// --------------------------------------------------------------------------
// PoissonBivector
// --------------------------------------------------------------------------

int PoissonBivector::upper_index(int i, int j) const {
  int n = chart_.dim;
  return i * n - i * (i + 1) / 2 + (j - i - 1);
}

PoissonBivector::PoissonBivector(Chart chart, std::vector<Expr> upper_entries)
    : chart_(std::move(chart)), upper_(std::move(upper_entries)) {
  int n = chart_.dim;
  if (static_cast<int>(upper_.size()) != n * (n - 1) / 2)
    throw std::invalid_argument("bivector needs n(n-1)/2 upper entries");
  for (const Expr& e : upper_)
    if (e.min_dim() > n)
      throw std::invalid_argument("bivector entry references coordinate beyond chart dim");
}

PoissonBivector PoissonBivector::zero(Chart chart) {
  int n = chart.dim;
  return PoissonBivector(std::move(chart),
                         std::vector<Expr>(n * (n - 1) / 2, Expr()));
}

Expr PoissonBivector::entry(int i, int j) const {
  if (i == j) return Expr();
  if (i < j) return upper_[upper_index(i, j)];
  const Expr& u = upper_[upper_index(j, i)];
  return u.is_zero_literal() ? Expr() : -u;
}

double PoissonBivector::entry_at(int i, int j, std::span<const double> p) const {
  if (i == j) return 0.0;
  double v = upper_[upper_index(std::min(i, j), std::max(i, j))].eval(p);
  return i < j ? v : -v;
}

std::vector<Expr> PoissonBivector::jacobiator() const {
  int n = chart_.dim;
  std::vector<Expr> out;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k) {
        // J_ijk = sum_a pi_ak d_a pi_ij + pi_ai d_a pi_jk + pi_aj d_a pi_ki
        Expr acc;
        for (int a = 0; a < n; ++a) {
          acc = acc + entry(a, k) * entry(i, j).diff(a) +
                entry(a, i) * entry(j, k).diff(a) +
                entry(a, j) * entry(k, i).diff(a);
        }
        out.push_back(acc);
      }
  return out;
}

double PoissonBivector::jacobiator_at(std::span<const double> p) const {
  double m = 0.0;
  for (const Expr& e : jacobiator()) m = std::max(m, std::abs(e.eval(p)));
  return m;
}

// --------------------------------------------------------------------------
// Algebroid
// --------------------------------------------------------------------------

int Algebroid::pair_index(int i, int j) const {
  return i * rank_ - i * (i + 1) / 2 + (j - i - 1);
}

Algebroid::Algebroid(Chart chart, int rank, std::vector<Expr> anchor,
                     std::vector<StructureEntry> structure)
    : chart_(std::move(chart)), rank_(rank), anchor_(std::move(anchor)) {
  int n = chart_.dim;
  if (rank_ < 0) throw std::invalid_argument("rank must be nonnegative");
  if (static_cast<int>(anchor_.size()) != n * rank_)
    throw std::invalid_argument("anchor must be n x r expressions");
  structure_upper_.assign(static_cast<std::size_t>(rank_) * rank_ * (rank_ - 1) / 2,
                          Expr());
  for (auto& s : structure) {
    if (s.k < 0 || s.k >= rank_ || s.i < 0 || s.j >= rank_ || s.i >= s.j)
      throw std::invalid_argument("structure entry requires 0 <= i < j < r");
    structure_upper_[s.k * (rank_ * (rank_ - 1) / 2) + pair_index(s.i, s.j)] =
        s.value;
  }
  anchor_dx_.reserve(static_cast<std::size_t>(n) * n * rank_);
  for (int m = 0; m < n; ++m)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < rank_; ++i)
        anchor_dx_.push_back(anchor_entry(j, i).diff(m));
}

Expr Algebroid::structure_fn(int k, int i, int j) const {
  if (i == j) return Expr();
  int npairs = rank_ * (rank_ - 1) / 2;
  if (i < j) return structure_upper_[k * npairs + pair_index(i, j)];
  return -structure_upper_[k * npairs + pair_index(j, i)];
}

Algebroid Algebroid::cotangent(const PoissonBivector& pi) {
  const Chart& chart = pi.chart();
  int n = chart.dim;
  std::vector<Expr> anchor(static_cast<std::size_t>(n) * n, Expr());
  // rho(dx_i) = sum_j pi_ij d_j, so anchor(j, i) = pi_ij.
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) anchor[j * n + i] = pi.entry(i, j);
  std::vector<StructureEntry> structure;
  // [dx_i, dx_j] = d pi_ij, so c^k_ij = d_k pi_ij.
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = 0; k < n; ++k)
        structure.push_back({k, i, j, pi.entry(i, j).diff(k)});
  return Algebroid(chart, n, std::move(anchor), std::move(structure));
}

Algebroid Algebroid::lie_algebra(int rank, const std::vector<double>& constants,
                                 double jacobi_tol) {
  int r = rank;
  if (static_cast<int>(constants.size()) != r * r * r)
    throw std::invalid_argument("expected r^3 structure constants");
  auto c = [&](int k, int i, int j) { return constants[k * r * r + i * r + j]; };
  for (int k = 0; k < r; ++k)
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j)
        if (std::abs(c(k, i, j) + c(k, j, i)) > jacobi_tol)
          throw std::invalid_argument("structure constants not antisymmetric");
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j)
      for (int k = 0; k < r; ++k)
        for (int l = 0; l < r; ++l) {
          double jac = 0.0;
          for (int m = 0; m < r; ++m)
            jac += c(m, i, j) * c(l, m, k) + c(m, j, k) * c(l, m, i) +
                   c(m, k, i) * c(l, m, j);
          if (std::abs(jac) > jacobi_tol)
            throw std::invalid_argument("structure constants violate the Jacobi identity");
        }
  std::vector<StructureEntry> structure;
  for (int k = 0; k < r; ++k)
    for (int i = 0; i < r; ++i)
      for (int j = i + 1; j < r; ++j)
        if (c(k, i, j) != 0.0)
          structure.push_back({k, i, j, Expr::number(c(k, i, j))});
  return Algebroid(Chart::point(), r, {}, std::move(structure));
}

void Algebroid::set_connection(std::vector<std::vector<Expr>> christoffel) {
  if (static_cast<int>(christoffel.size()) != chart_.dim)
    throw std::invalid_argument("need one Christoffel matrix per base direction");
  for (const auto& g : christoffel)
    if (static_cast<int>(g.size()) != rank_ * rank_)
      throw std::invalid_argument("Christoffel matrices must be r x r");
  christoffel_ = std::move(christoffel);
}

Vec Algebroid::anchor_apply(std::span<const double> x,
                            std::span<const double> a) const {
  int n = chart_.dim;
  Vec out(n, 0.0);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < rank_; ++i) {
      double coef = a[i];
      if (coef != 0.0) out[j] += anchor_[j * rank_ + i].eval(x) * coef;
    }
  return out;
}

std::vector<double> Algebroid::anchor_at(std::span<const double> x) const {
  std::vector<double> m(anchor_.size());
  for (std::size_t i = 0; i < anchor_.size(); ++i) m[i] = anchor_[i].eval(x);
  return m;
}

Vec Algebroid::anchor_derivative_apply(std::span<const double> x,
                                       std::span<const double> a,
                                       std::span<const double> dgamma) const {
  int n = chart_.dim;
  Vec out(n, 0.0);
  for (int m = 0; m < n; ++m) {
    if (dgamma[m] == 0.0) continue;
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < rank_; ++i) {
        if (a[i] == 0.0) continue;
        const Expr& d = anchor_dx_[(static_cast<std::size_t>(m) * n + j) * rank_ + i];
        out[j] += dgamma[m] * d.eval(x) * a[i];
      }
  }
  return out;
}

Vec Algebroid::torsion(std::span<const double> x, std::span<const double> a,
                       std::span<const double> b) const {
  int n = chart_.dim;
  Vec out(rank_, 0.0);
  for (int k = 0; k < rank_; ++k) {
    double acc = 0.0;
    for (int i = 0; i < rank_; ++i)
      for (int j = i + 1; j < rank_; ++j) {
        const Expr& ckij =
            structure_upper_[k * (rank_ * (rank_ - 1) / 2) + pair_index(i, j)];
        if (ckij.is_zero_literal()) continue;
        acc += ckij.eval(x) * (a[i] * b[j] - a[j] * b[i]);
      }
    out[k] = acc;
  }
  if (!christoffel_.empty()) {
    Vec ra = anchor_apply(x, a);
    Vec rb = anchor_apply(x, b);
    for (int m = 0; m < n; ++m) {
      if (ra[m] == 0.0 && rb[m] == 0.0) continue;
      for (int k = 0; k < rank_; ++k) {
        double ga = 0.0, gb = 0.0;
        for (int l = 0; l < rank_; ++l) {
          double g = christoffel_[m][k * rank_ + l].eval(x);
          ga += g * a[l];
          gb += g * b[l];
        }
        out[k] += rb[m] * ga - ra[m] * gb;
      }
    }
  }
  return out;
}

Section Algebroid::bracket_of_sections(const Section& s1,
                                       const Section& s2) const {
  if (static_cast<int>(s1.components.size()) != rank_ ||
      static_cast<int>(s2.components.size()) != rank_)
    throw std::invalid_argument("section components must match rank");
  int n = chart_.dim;
  // rho(s)^m as expressions
  std::vector<Expr> rho1(n), rho2(n);
  for (int m = 0; m < n; ++m) {
    Expr a1, a2;
    for (int i = 0; i < rank_; ++i) {
      a1 = a1 + anchor_entry(m, i) * s1.components[i];
      a2 = a2 + anchor_entry(m, i) * s2.components[i];
    }
    rho1[m] = a1;
    rho2[m] = a2;
  }
  Section out;
  out.components.reserve(rank_);
  for (int k = 0; k < rank_; ++k) {
    Expr acc;
    for (int i = 0; i < rank_; ++i)
      for (int j = i + 1; j < rank_; ++j) {
        Expr ckij = structure_fn(k, i, j);
        if (ckij.is_zero_literal()) continue;
        acc = acc + ckij * (s1.components[i] * s2.components[j] -
                            s1.components[j] * s2.components[i]);
      }
    for (int m = 0; m < n; ++m)
      acc = acc + rho1[m] * s2.components[k].diff(m) -
            rho2[m] * s1.components[k].diff(m);
    out.components.push_back(acc);
  }
  return out;
}

CheckReport Algebroid::check_anchor_homomorphism(int samples, double tol,
                                                 Rng& rng) const {
  CheckReport rep;
  int n = chart_.dim;
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    Vec x = chart_.random_point(rng);
    std::vector<double> rho(anchor_.size());
    for (std::size_t e = 0; e < anchor_.size(); ++e) rho[e] = anchor_[e].eval(x);
    std::vector<double> drho(anchor_dx_.size());
    for (std::size_t e = 0; e < anchor_dx_.size(); ++e)
      drho[e] = anchor_dx_[e].eval(x);
    auto rho_at = [&](int j, int i) { return rho[j * rank_ + i]; };
    auto drho_at = [&](int m, int j, int i) {
      return drho[(static_cast<std::size_t>(m) * n + j) * rank_ + i];
    };
    for (int i = 0; i < rank_; ++i)
      for (int j = i + 1; j < rank_; ++j)
        for (int l = 0; l < n; ++l) {
          double comm = 0.0;
          for (int m = 0; m < n; ++m)
            comm += rho_at(m, i) * drho_at(m, l, j) -
                    rho_at(m, j) * drho_at(m, l, i);
          double anch = 0.0;
          for (int k = 0; k < rank_; ++k) {
            Expr ckij = structure_fn(k, i, j);
            if (!ckij.is_zero_literal()) anch += ckij.eval(x) * rho_at(l, k);
          }
          worst = std::max(worst, std::abs(anch - comm));
        }
  }
  rep.add("anchor_homomorphism", worst, tol);
  return rep;
}

CheckReport Algebroid::check_section_jacobi(int samples, double tol,
                                            Rng& rng) const {
  CheckReport rep;
  auto frame = [&](int i) {
    Section s;
    s.components.assign(rank_, Expr());
    s.components[i] = Expr::number(1.0);
    return s;
  };
  double worst = 0.0;
  for (int i = 0; i < rank_; ++i)
    for (int j = i + 1; j < rank_; ++j)
      for (int k = j; k < rank_; ++k) {
        Section ei = frame(i), ej = frame(j), ek = frame(k);
        Section t1 = bracket_of_sections(bracket_of_sections(ei, ej), ek);
        Section t2 = bracket_of_sections(bracket_of_sections(ej, ek), ei);
        Section t3 = bracket_of_sections(bracket_of_sections(ek, ei), ej);
        for (int s = 0; s < samples; ++s) {
          Vec x = chart_.random_point(rng);
          for (int l = 0; l < rank_; ++l) {
            double v = t1.components[l].eval(x) + t2.components[l].eval(x) +
                       t3.components[l].eval(x);
            worst = std::max(worst, std::abs(v));
          }
        }
      }
  rep.add("section_jacobi", worst, tol);
  return rep;
}

CheckReport check_poisson_jacobi(const PoissonBivector& pi, int samples,
                                 double tol, Rng& rng) {
  CheckReport rep;
  std::vector<Expr> jac = pi.jacobiator();
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    Vec x = pi.chart().random_point(rng);
    for (const Expr& e : jac) worst = std::max(worst, std::abs(e.eval(x)));
  }
  rep.add("poisson_jacobi", worst, tol);
  return rep;
}

// --------------------------------------------------------------------------
// Stock examples
// --------------------------------------------------------------------------

PoissonBivector so3_dual_bivector(double box_half_width) {
  Chart chart = Chart::box_chart(3, -box_half_width, box_half_width);
  // upper entries in order (1,2), (1,3), (2,3):
  // pi_12 = x3, pi_13 = -pi_31 = -x2, pi_23 = x1
  return PoissonBivector(chart, {Expr::var(2), -Expr::var(1), Expr::var(0)});
}

PoissonBivector non_jacobi_bivector(double box_half_width) {
  Chart chart = Chart::box_chart(3, -box_half_width, box_half_width);
  // pi_12 = x3, pi_31 = x1 (so pi_13 = -x1), pi_23 = x1
  return PoissonBivector(chart, {Expr::var(2), -Expr::var(0), Expr::var(0)});
}

std::vector<double> so3_structure_constants() {
  std::vector<double> c(27, 0.0);
  auto set = [&](int k, int i, int j, double v) {
    c[k * 9 + i * 3 + j] = v;
    c[k * 9 + j * 3 + i] = -v;
  };
  set(2, 0, 1, 1.0);  // [e1,e2] = e3
  set(0, 1, 2, 1.0);  // [e2,e3] = e1
  set(1, 2, 0, 1.0);  // [e3,e1] = e2
  return c;
}

}  // namespace apaths
