#pragma once

#include <vector>

#include "apaths/path.hpp"

namespace apaths {

/// Two-parameter family a(eps, t) of A-paths on a uniform (eps, t) grid.
/// Slice j is the A-path at eps_j = j/(n_eps-1).
struct PathFamily {
  const Algebroid* algebroid = nullptr;
  int n_eps = 0;
  TimeGrid grid;
  std::vector<std::vector<Vec>> base;   // [eps][t] chart points
  std::vector<std::vector<Vec>> fiber;  // [eps][t] fiber vectors

  double eps_h() const { return 1.0 / (n_eps - 1); }
  APath slice(int j) const;
  /// max endpoint drift of the base curves across eps.
  double endpoint_drift() const;
};

/// Solution field b(eps, t) of the homotopy equation with b(eps, 0) = 0.
struct HomotopyField {
  int n_eps = 0;
  TimeGrid grid;
  std::vector<std::vector<Vec>> b;  // [eps][t]

  double max_end_norm() const;
  std::vector<double> end_profile() const;  // eps -> |b(eps,1)|_inf
};

inline double default_homotopy_tol(int n_t, int n_eps) {
  double ht = 1.0 / (n_t - 1), he = 1.0 / (n_eps - 1);
  return std::max(1e-6, 50.0 * (ht * ht + he * he));
}

/// Integrate d_t b = d_eps a + T(a, b) per eps-slice (RK4 in t, central
/// differences in eps). Slices run in parallel when OpenMP is enabled.
HomotopyField solve_homotopy_equation(const PathFamily& fam);
/// Serial reference implementation; bit-identical to the parallel kernel.
HomotopyField solve_homotopy_equation_serial(const PathFamily& fam);

struct HomotopyDecision {
  bool homotopic = false;
  double max_end_defect = 0.0;
  double tol = 0.0;
  std::vector<double> profile;
};

/// Decide homotopy of the eps-extreme slices; rejects families whose base
/// endpoints drift in eps.
HomotopyDecision is_homotopic_along_family(const PathFamily& fam, double tol);

/// Linear interpolation family between two paths. Only valid when the anchor
/// vanishes along both paths or the base is a point; throws otherwise.
PathFamily linear_family(const APath& p, const APath& q, int n_eps);

/// Family of reparametrizations of one path: slice eps rescales time by
/// tau_eps(t) = t - eps * strength * sin(2 pi t)/(2 pi). Every slice is an
/// A-path with the same endpoints, so the family is a genuine homotopy.
PathFamily reparametrization_family(const APath& p, int n_eps,
                                    double strength = 0.8);

/// Family from an analytic fiber field: fiber(j,k) supplied per node, base
/// solved per slice from x0.
PathFamily family_from_fiber_field(const Algebroid& algebroid, const Vec& x0,
                                   const std::vector<std::vector<Vec>>& fiber,
                                   TimeGrid grid);

/// d_eps a at every node: central differences inside, second-order one-sided
/// at eps = 0, 1.
std::vector<std::vector<Vec>> eps_derivative(const std::vector<std::vector<Vec>>& field,
                                             double eps_h);

}  // namespace apaths
