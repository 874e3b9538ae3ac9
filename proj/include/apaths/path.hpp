#pragma once

#include <utility>
#include <vector>

#include "apaths/algebroid.hpp"

namespace apaths {

/// Uniform grid on [0,1] with n_t >= 3 nodes.
struct TimeGrid {
  int n_t = 3;

  double h() const { return 1.0 / (n_t - 1); }
  double node(int k) const { return static_cast<double>(k) / (n_t - 1); }
};

/// Default A-path residual tolerance: tracks the O(h^2) consistency order of
/// the finite-difference validation with headroom for the curvature constants
/// of time-rescaled (cutoff, concatenated) paths.
inline double default_path_tol(const TimeGrid& g) { return 200.0 * g.h() * g.h(); }

/// Discretized A-path: base curve and fiber curve sampled on a time grid.
/// The algebroid is referenced, not owned; it must outlive the path.
struct APath {
  const Algebroid* algebroid = nullptr;
  TimeGrid grid;
  std::vector<Vec> base;   // n_t points of dim n
  std::vector<Vec> fiber;  // n_t fiber vectors of dim r
};

enum class PathClass { A0Path, APath, Invalid };

struct PathValidation {
  double apath_residual = 0.0;    // max |rho(gamma)a - gamma'|
  double boundary_fiber = 0.0;    // max endpoint |a|
  double boundary_deriv = 0.0;    // max one-sided |a'| at the endpoints
  int worst_node = 0;
  PathClass classify(double tol) const {
    if (apath_residual >= tol) return PathClass::Invalid;
    if (boundary_fiber < tol && boundary_deriv < tol) return PathClass::A0Path;
    return PathClass::APath;
  }
};

/// Integrate gamma' = rho(gamma) a with RK4, a linearly interpolated
/// between nodes. Throws if the trajectory leaves the chart.
APath solve_base_path(const Algebroid& algebroid, const Vec& x0,
                      const std::vector<Vec>& fiber_curve, TimeGrid grid);

PathValidation validate_apath(const APath& p);

/// Rescale time by the default cutoff tau(t) = t - sin(2 pi t)/(2 pi) so that
/// fiber and fiber velocity vanish at the endpoints.
APath reparametrize_to_a0(const APath& p);

/// Time-rescaled concatenation traversing q first, then p, on a merged grid
/// of 2 n_t - 1 nodes; requires target(q) = source(p) within tol.
APath concatenate(const APath& p, const APath& q, double endpoint_tol);

APath reverse(const APath& p);

APath constant_path(const Algebroid& algebroid, const Vec& x, TimeGrid grid);

/// (source, target) = (gamma(0), gamma(1)).
std::pair<Vec, Vec> path_source_target(const APath& p);

/// Linear interpolation helpers shared by the ODE solvers.
Vec lerp_nodes(const std::vector<Vec>& nodes, const TimeGrid& grid, double t);

/// Random A0 fiber curve: envelope sin^2(pi t) times a low-order trig
/// polynomial with coefficients in [-amplitude, amplitude].
std::vector<Vec> random_a0_fiber_curve(int rank, TimeGrid grid, double amplitude,
                                       Rng& rng);

}  // namespace apaths
