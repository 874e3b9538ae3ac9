#pragma once

#include <vector>

#include "apaths/homotopy.hpp"
#include "apaths/path.hpp"

namespace apaths {

/// Tangent vector to discretized cotangent path space: per-node base and
/// fiber variations attached to a reference grid.
struct PathVariation {
  std::vector<Vec> dbase;   // n_t chart vectors
  std::vector<Vec> dfiber;  // n_t fiber vectors

  double magnitude() const;
};

inline double trapezoid_weight(const TimeGrid& grid, int k) {
  double h = grid.h();
  return (k == 0 || k == grid.n_t - 1) ? 0.5 * h : h;
}

/// Discrete canonical 2-form:
/// omega(d1, d2) = sum_k w_k (<d1.a_k, d2.gamma_k> - <d2.a_k, d1.gamma_k>).
double eval_path_form(const TimeGrid& grid, const PathVariation& d1,
                      const PathVariation& d2);

PathVariation random_variation(int dim, int rank, TimeGrid grid, Rng& rng,
                               bool zero_at_ends = false);

/// Split-variation additivity of the form under concatenation
/// (variations vanishing at the junction), plus a reported junction-straddle
/// trial whose defect is bounded by the junction weight times the variation
/// magnitudes.
CheckReport check_multiplicativity(const APath& p, const APath& q, int trials,
                                   Rng& rng);

/// Tangent to the A-path constraint through a reference path: free fiber
/// variation plus the linearized base ODE
/// dgamma' = (D rho)[dgamma] a + rho dgamma0-free dfiber.
PathVariation constraint_tangent(const APath& ref,
                                 const std::vector<Vec>& dfiber,
                                 const Vec& dgamma0);

/// Pair the foliation direction of a verified homotopy family against random
/// constraint-tangent probes; max |omega| must stay below tol_kernel.
CheckReport check_kernel_containment(const PathFamily& fam, int probes,
                                     Rng& rng);

inline double default_kernel_tol(int n_t, int n_eps) {
  double ht = 1.0 / (n_t - 1), he = 1.0 / (n_eps - 1);
  return 100.0 * (ht * ht + he * he);
}

enum class ReducedBracketModel { ZeroPoissonCotangent, SymplecticPair };

/// Compare {f o s, g o s} on the explicit oracle groupoid with {f, g}_pi o s
/// at random points.
CheckReport oracle_reduced_bracket(ReducedBracketModel model,
                                   const PoissonBivector& pi, const Expr& f,
                                   const Expr& g, int samples, double tol,
                                   Rng& rng);

/// Dense pairing matrix of the discrete form in the node basis
/// (ordering: all base variations, then all fiber variations).
std::vector<std::vector<double>> path_form_gram(int dim, TimeGrid grid);

}  // namespace apaths
