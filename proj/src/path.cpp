#include "apaths/path.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace apaths {

Vec lerp_nodes(const std::vector<Vec>& nodes, const TimeGrid& grid, double t) {
  if (t <= 0.0) return nodes.front();
  if (t >= 1.0) return nodes.back();
  double s = t * (grid.n_t - 1);
  int k = static_cast<int>(s);
  if (k >= grid.n_t - 1) k = grid.n_t - 2;
  double w = s - k;
  Vec out(nodes[k].size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = (1.0 - w) * nodes[k][i] + w * nodes[k + 1][i];
  return out;
}

APath solve_base_path(const Algebroid& algebroid, const Vec& x0,
                      const std::vector<Vec>& fiber_curve, TimeGrid grid) {
  if (static_cast<int>(fiber_curve.size()) != grid.n_t)
    throw std::invalid_argument("fiber curve must have n_t nodes");
  if (!algebroid.chart().contains(x0))
    throw std::invalid_argument("x0 outside chart domain");
  APath p;
  p.algebroid = &algebroid;
  p.grid = grid;
  p.fiber = fiber_curve;
  p.base.resize(grid.n_t);
  p.base[0] = x0;
  double h = grid.h();
  auto rhs = [&](const Vec& x, double t) {
    return algebroid.anchor_apply(x, lerp_nodes(fiber_curve, grid, t));
  };
  for (int k = 0; k + 1 < grid.n_t; ++k) {
    double t = grid.node(k);
    const Vec& x = p.base[k];
    Vec k1 = rhs(x, t);
    Vec k2 = rhs(axpy(0.5 * h, k1, x), t + 0.5 * h);
    Vec k3 = rhs(axpy(0.5 * h, k2, x), t + 0.5 * h);
    Vec k4 = rhs(axpy(h, k3, x), t + h);
    Vec next(x);
    for (std::size_t i = 0; i < next.size(); ++i)
      next[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    if (!algebroid.chart().contains(next))
      throw std::runtime_error("base path exits chart domain at t = " +
                               std::to_string(grid.node(k + 1)));
    p.base[k + 1] = std::move(next);
  }
  return p;
}

PathValidation validate_apath(const APath& p) {
  PathValidation v;
  const int n_t = p.grid.n_t;
  const double h = p.grid.h();
  for (int k = 0; k < n_t; ++k) {
    Vec rhoa = p.algebroid->anchor_apply(p.base[k], p.fiber[k]);
    Vec deriv(p.base[k].size());
    for (std::size_t i = 0; i < deriv.size(); ++i) {
      if (k == 0)
        deriv[i] = (4.0 * (p.base[1][i] - p.base[0][i]) -
                    (p.base[2][i] - p.base[0][i])) /
                   (2.0 * h);
      else if (k == n_t - 1)
        deriv[i] = (4.0 * (p.base[n_t - 1][i] - p.base[n_t - 2][i]) -
                    (p.base[n_t - 1][i] - p.base[n_t - 3][i])) /
                   (2.0 * h);
      else
        deriv[i] = (p.base[k + 1][i] - p.base[k - 1][i]) / (2.0 * h);
    }
    double res = 0.0;
    for (std::size_t i = 0; i < deriv.size(); ++i)
      res = std::max(res, std::abs(rhoa[i] - deriv[i]));
    if (res > v.apath_residual) {
      v.apath_residual = res;
      v.worst_node = k;
    }
  }
  v.boundary_fiber = std::max(norm_inf(p.fiber.front()), norm_inf(p.fiber.back()));
  // second-order one-sided estimates: O(h^2) for curves whose fiber and
  // fiber velocity genuinely vanish at the boundary
  double d0 = 0.0, d1 = 0.0;
  for (std::size_t i = 0; i < p.fiber.front().size(); ++i) {
    d0 = std::max(d0, std::abs(4.0 * (p.fiber[1][i] - p.fiber[0][i]) -
                               (p.fiber[2][i] - p.fiber[0][i])) /
                          (2.0 * h));
    d1 = std::max(d1, std::abs(4.0 * (p.fiber[n_t - 1][i] - p.fiber[n_t - 2][i]) -
                               (p.fiber[n_t - 1][i] - p.fiber[n_t - 3][i])) /
                          (2.0 * h));
  }
  v.boundary_deriv = std::max(d0, d1);
  return v;
}

APath reparametrize_to_a0(const APath& p) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  APath out;
  out.algebroid = p.algebroid;
  out.grid = p.grid;
  out.base.resize(p.grid.n_t);
  out.fiber.resize(p.grid.n_t);
  for (int k = 0; k < p.grid.n_t; ++k) {
    double t = p.grid.node(k);
    double tau = t - std::sin(two_pi * t) / two_pi;
    double dtau = 1.0 - std::cos(two_pi * t);
    out.base[k] = lerp_nodes(p.base, p.grid, tau);
    out.fiber[k] = scaled(dtau, lerp_nodes(p.fiber, p.grid, tau));
  }
  return out;
}

APath concatenate(const APath& p, const APath& q, double endpoint_tol) {
  if (p.algebroid != q.algebroid)
    throw std::invalid_argument("paths live over different algebroids");
  if (p.grid.n_t != q.grid.n_t)
    throw std::invalid_argument("paths must share a time grid");
  const Vec& q_target = q.base.back();
  const Vec& p_source = p.base.front();
  double gap = 0.0;
  for (std::size_t i = 0; i < q_target.size(); ++i)
    gap = std::max(gap, std::abs(q_target[i] - p_source[i]));
  if (gap > endpoint_tol)
    throw std::invalid_argument("endpoint mismatch: target(q) != source(p)");
  int n_t = p.grid.n_t;
  APath out;
  out.algebroid = p.algebroid;
  out.grid = TimeGrid{2 * n_t - 1};
  out.base.resize(out.grid.n_t);
  out.fiber.resize(out.grid.n_t);
  for (int k = 0; k < n_t; ++k) {
    out.base[k] = q.base[k];
    out.fiber[k] = scaled(2.0, q.fiber[k]);
  }
  for (int k = 1; k < n_t; ++k) {
    out.base[n_t - 1 + k] = p.base[k];
    out.fiber[n_t - 1 + k] = scaled(2.0, p.fiber[k]);
  }
  return out;
}

APath reverse(const APath& p) {
  APath out;
  out.algebroid = p.algebroid;
  out.grid = p.grid;
  out.base.resize(p.grid.n_t);
  out.fiber.resize(p.grid.n_t);
  for (int k = 0; k < p.grid.n_t; ++k) {
    out.base[k] = p.base[p.grid.n_t - 1 - k];
    out.fiber[k] = scaled(-1.0, p.fiber[p.grid.n_t - 1 - k]);
  }
  return out;
}

APath constant_path(const Algebroid& algebroid, const Vec& x, TimeGrid grid) {
  if (!algebroid.chart().contains(x))
    throw std::invalid_argument("point outside chart domain");
  APath out;
  out.algebroid = &algebroid;
  out.grid = grid;
  out.base.assign(grid.n_t, x);
  out.fiber.assign(grid.n_t, Vec(algebroid.rank(), 0.0));
  return out;
}

std::pair<Vec, Vec> path_source_target(const APath& p) {
  return {p.base.front(), p.base.back()};
}

std::vector<Vec> random_a0_fiber_curve(int rank, TimeGrid grid, double amplitude,
                                       Rng& rng) {
  constexpr int n_modes = 3;
  std::vector<Vec> coeff(n_modes);
  for (int m = 0; m < n_modes; ++m)
    coeff[m] = rng.uniform_vec(rank, -amplitude, amplitude);
  std::vector<Vec> out(grid.n_t, Vec(rank, 0.0));
  for (int k = 0; k < grid.n_t; ++k) {
    double t = grid.node(k);
    double env = std::sin(std::numbers::pi * t);
    env *= env;
    for (int m = 0; m < n_modes; ++m) {
      double mode = env * std::cos((m + 1) * std::numbers::pi * t);
      for (int i = 0; i < rank; ++i) out[k][i] += mode * coeff[m][i];
    }
  }
  // endpoints are exactly zero by construction of the envelope
  for (int i = 0; i < rank; ++i) {
    out.front()[i] = 0.0;
    out.back()[i] = 0.0;
  }
  return out;
}

}  // namespace apaths
