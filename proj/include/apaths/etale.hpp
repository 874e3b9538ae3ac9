#pragma once

#include <vector>

#include "apaths/algebroid.hpp"
#include "apaths/expr.hpp"
#include "apaths/report.hpp"
#include "apaths/rng.hpp"

namespace apaths {

/// Finite group acting on a chart by symbolic diffeomorphisms; the etale
/// presentation used for invariant-form and Poisson-bracket calculus.
class FiniteActionGroupoid {
 public:
  /// mult[g][h] = g*h; action[g] lists dim coordinate expressions.
  FiniteActionGroupoid(Chart chart, std::vector<std::vector<int>> mult,
                       std::vector<std::vector<Expr>> action);

  const Chart& chart() const { return chart_; }
  int order() const { return static_cast<int>(mult_.size()); }
  int identity() const { return identity_; }
  int multiply(int g, int h) const { return mult_[g][h]; }
  const std::vector<Expr>& action(int g) const { return action_[g]; }

  /// Composition and identity axioms at random points.
  CheckReport validate(int samples, double tol, Rng& rng) const;

  /// Z/2 acting on R^2 by central inversion.
  static FiniteActionGroupoid z2_inversion(double box_half_width = 1.0);
  /// Z/4 acting on R^2 by quarter-turn rotation.
  static FiniteActionGroupoid z4_rotation(double box_half_width = 1.0);
  /// Trivial group on R^2.
  static FiniteActionGroupoid trivial(double box_half_width = 1.0);

 private:
  Chart chart_;
  std::vector<std::vector<int>> mult_;
  std::vector<std::vector<Expr>> action_;
  int identity_ = 0;
};

/// Degree-k form with antisymmetric coefficients stored on sorted index
/// tuples i1 < ... < ik, lexicographic order.
struct CoordForm {
  int dim = 0;
  int degree = 0;
  std::vector<Expr> coeff;

  static CoordForm make(int dim, int degree);
  static CoordForm symplectic_standard(int dim);  // dx1^dx2 + dx3^dx4 + ...

  int coeff_count() const { return static_cast<int>(coeff.size()); }
  /// All sorted degree-tuples in storage order.
  static std::vector<std::vector<int>> index_tuples(int dim, int degree);
};

/// Symbolic pullback through the coordinate map (Jacobian minors contracted
/// into the composed coefficients).
CoordForm pullback_form(const CoordForm& w, const std::vector<Expr>& map);

/// Per-element invariance g*w = w at random points.
CheckReport check_invariance(const FiniteActionGroupoid& G, const CoordForm& w,
                             double tol, int samples, Rng& rng);
/// Arrow-space formulation s*w = t*w, checked per arrow component.
CheckReport check_invariance_arrow(const FiniteActionGroupoid& G,
                                   const CoordForm& w, double tol, int samples,
                                   Rng& rng);

bool is_invariant_function(const FiniteActionGroupoid& G, const Expr& f,
                           double tol, int samples, Rng& rng);

/// Poisson bracket of invariant functions defined by an invariant symplectic
/// form; the result is again invariant. Throws on non-invariant input or a
/// degenerate form.
Expr invariant_poisson_bracket(const FiniteActionGroupoid& G, const CoordForm& w,
                               const Expr& f, const Expr& g);

/// Bracket of a symplectic coefficient matrix without the invariance
/// preconditions (used by the transport checks).
Expr symplectic_bracket(const CoordForm& w, const Expr& f, const Expr& g);

/// c identical copies of the chart, each mapping identically to the original
/// atlas; arrows are indexed by (source copy, target copy, group element).
struct RefinedAtlas {
  const FiniteActionGroupoid* groupoid = nullptr;
  int copies = 0;

  int arrow_components() const { return copies * copies * groupoid->order(); }
};

RefinedAtlas refine_atlas(const FiniteActionGroupoid& G, int copies);

/// The bracket computed on the original atlas and on every copy of the
/// refined atlas agrees pointwise (transport through the refinement morphism
/// is the identity chart map).
CheckReport check_presentation_independence(const FiniteActionGroupoid& G,
                                            const RefinedAtlas& R,
                                            const CoordForm& w, const Expr& f,
                                            const Expr& g, double tol,
                                            int samples, Rng& rng);

}  // namespace apaths
