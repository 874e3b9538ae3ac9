#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "apaths/expr.hpp"
#include "apaths/report.hpp"
#include "apaths/rng.hpp"
#include "apaths/smallmat.hpp"

namespace apaths {

/// Axis-aligned box chart; dim 0 is the point chart used by Lie algebras.
struct Chart {
  int dim = 0;
  std::vector<std::array<double, 2>> box;  // per-axis {lower, upper}

  static Chart box_chart(int dim, double lo, double hi);
  static Chart point() { return Chart{}; }

  bool contains(std::span<const double> p) const;
  Vec random_point(Rng& rng) const;
};

/// Antisymmetric bivector field pi_ij = {x_i, x_j}; independent entries
/// stored for i < j only.
class PoissonBivector {
 public:
  PoissonBivector(Chart chart, std::vector<Expr> upper_entries);
  static PoissonBivector zero(Chart chart);

  const Chart& chart() const { return chart_; }
  /// pi_ij with sign; i == j yields the zero expression.
  Expr entry(int i, int j) const;
  double entry_at(int i, int j, std::span<const double> p) const;

  /// Independent components of the Jacobiator
  /// J_ijk = sum_l pi_il d_l pi_jk + cyclic, for i < j < k.
  std::vector<Expr> jacobiator() const;
  double jacobiator_at(std::span<const double> p) const;

 private:
  Chart chart_;
  std::vector<Expr> upper_;  // (i,j) with i<j, lexicographic
  int upper_index(int i, int j) const;
};

/// Section of the algebroid: component expressions in the frame e_1..e_r.
struct Section {
  std::vector<Expr> components;
};

/// Chart-local Lie algebroid: anchor matrix field, structure functions
/// c^k_ij (stored i<j), optional Christoffel coefficients.
class Algebroid {
 public:
  /// anchor is n x r row-major: anchor[j*r+i] = component j of rho(e_i).
  /// structure lists (k,i,j,expr) with i<j; omitted entries are zero.
  struct StructureEntry {
    int k, i, j;
    Expr value;
  };
  Algebroid(Chart chart, int rank, std::vector<Expr> anchor,
            std::vector<StructureEntry> structure);

  static Algebroid cotangent(const PoissonBivector& pi);
  /// Lie algebra over the point chart; constants must be antisymmetric in
  /// the lower indices and satisfy the Jacobi identity to jacobi_tol.
  static Algebroid lie_algebra(int rank, const std::vector<double>& constants,
                               double jacobi_tol = 1e-12);

  const Chart& chart() const { return chart_; }
  int dim() const { return chart_.dim; }
  int rank() const { return rank_; }

  Expr anchor_entry(int j, int i) const { return anchor_[j * rank_ + i]; }
  Expr structure_fn(int k, int i, int j) const;  // signed, any i,j

  bool has_connection() const { return !christoffel_.empty(); }
  /// Christoffel matrix Gamma_m (r x r of Expr) for base direction m.
  void set_connection(std::vector<std::vector<Expr>> christoffel);
  void clear_connection() { christoffel_.clear(); }

  /// rho(x) a, the anchor applied to a fiber vector at a point.
  Vec anchor_apply(std::span<const double> x, std::span<const double> a) const;
  /// Anchor matrix evaluated at x, row-major n x r.
  std::vector<double> anchor_at(std::span<const double> x) const;

  /// Directional derivative of the anchor: sum_m dgamma^m (d_m rho)(x) a.
  Vec anchor_derivative_apply(std::span<const double> x,
                              std::span<const double> a,
                              std::span<const double> dgamma) const;

  /// T(a,b)^k = sum_m rho(b)^m (Gamma_m a)^k - rho(a)^m (Gamma_m b)^k
  ///          + sum_ij c^k_ij a^i b^j, evaluated at x.
  Vec torsion(std::span<const double> x, std::span<const double> a,
              std::span<const double> b) const;

  Section bracket_of_sections(const Section& s1, const Section& s2) const;

  CheckReport check_anchor_homomorphism(int samples, double tol, Rng& rng) const;
  CheckReport check_section_jacobi(int samples, double tol, Rng& rng) const;

 private:
  Chart chart_;
  int rank_;
  std::vector<Expr> anchor_;                    // n*r
  std::vector<Expr> structure_upper_;           // k * npairs + pair(i<j)
  std::vector<std::vector<Expr>> christoffel_;  // n entries of r*r, row-major
  std::vector<Expr> anchor_dx_;                 // d anchor / d x_m, m*n*r

  int pair_index(int i, int j) const;  // i<j
};

CheckReport check_poisson_jacobi(const PoissonBivector& pi, int samples,
                                 double tol, Rng& rng);

/// so(3)* linear bivector pi_12 = x3, pi_23 = x1, pi_31 = x2 on a box chart.
PoissonBivector so3_dual_bivector(double box_half_width = 2.0);
/// The standard non-Jacobi example pi_12 = x3, pi_23 = x1, pi_31 = x1.
PoissonBivector non_jacobi_bivector(double box_half_width = 2.0);
/// so(3) structure constants c^k_ij = epsilon_ijk as a rank-3 tensor,
/// flattened k*9 + i*3 + j.
std::vector<double> so3_structure_constants();

}  // namespace apaths
