#include "apaths/homotopy.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace apaths {

APath PathFamily::slice(int j) const {
  APath p;
  p.algebroid = algebroid;
  p.grid = grid;
  p.base = base[j];
  p.fiber = fiber[j];
  return p;
}

double PathFamily::endpoint_drift() const {
  double drift = 0.0;
  for (int j = 1; j < n_eps; ++j) {
    for (std::size_t i = 0; i < base[0][0].size(); ++i) {
      drift = std::max(drift, std::abs(base[j].front()[i] - base[0].front()[i]));
      drift = std::max(drift, std::abs(base[j].back()[i] - base[0].back()[i]));
    }
  }
  return drift;
}

double HomotopyField::max_end_norm() const {
  double m = 0.0;
  for (const auto& slice : b) m = std::max(m, norm_inf(slice.back()));
  return m;
}

std::vector<double> HomotopyField::end_profile() const {
  std::vector<double> out;
  out.reserve(b.size());
  for (const auto& slice : b) out.push_back(norm_inf(slice.back()));
  return out;
}

std::vector<std::vector<Vec>> eps_derivative(
    const std::vector<std::vector<Vec>>& field, double eps_h) {
  int n_eps = static_cast<int>(field.size());
  int n_t = static_cast<int>(field[0].size());
  std::size_t r = field[0][0].size();
  std::vector<std::vector<Vec>> d(n_eps, std::vector<Vec>(n_t, Vec(r)));
  for (int j = 0; j < n_eps; ++j)
    for (int k = 0; k < n_t; ++k)
      for (std::size_t i = 0; i < r; ++i) {
        // one-sided stencils written as differences from the boundary value
        // so constant-in-eps data differentiates to exactly zero
        if (j == 0)
          d[j][k][i] = (4.0 * (field[1][k][i] - field[0][k][i]) -
                        (field[2][k][i] - field[0][k][i])) /
                       (2.0 * eps_h);
        else if (j == n_eps - 1)
          d[j][k][i] = (4.0 * (field[j][k][i] - field[j - 1][k][i]) -
                        (field[j][k][i] - field[j - 2][k][i])) /
                       (2.0 * eps_h);
        else
          d[j][k][i] = (field[j + 1][k][i] - field[j - 1][k][i]) / (2.0 * eps_h);
      }
  return d;
}

namespace {

void integrate_slice(const PathFamily& fam,
                     const std::vector<std::vector<Vec>>& de, int j,
                     std::vector<Vec>& out) {
  const Algebroid& A = *fam.algebroid;
  const TimeGrid grid = fam.grid;
  const int r = A.rank();
  const double h = grid.h();
  out.assign(grid.n_t, Vec(r, 0.0));
  auto rhs = [&](double t, const Vec& b) {
    Vec x = lerp_nodes(fam.base[j], grid, t);
    Vec a = lerp_nodes(fam.fiber[j], grid, t);
    Vec dea = lerp_nodes(de[j], grid, t);
    Vec tor = A.torsion(x, a, b);
    for (int i = 0; i < r; ++i) tor[i] += dea[i];
    return tor;
  };
  for (int k = 0; k + 1 < grid.n_t; ++k) {
    double t = grid.node(k);
    const Vec& b = out[k];
    Vec k1 = rhs(t, b);
    Vec k2 = rhs(t + 0.5 * h, axpy(0.5 * h, k1, b));
    Vec k3 = rhs(t + 0.5 * h, axpy(0.5 * h, k2, b));
    Vec k4 = rhs(t + h, axpy(h, k3, b));
    Vec next(b);
    for (int i = 0; i < r; ++i) {
      next[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
      if (!std::isfinite(next[i]))
        throw std::runtime_error("homotopy integration diverged");
    }
    out[k + 1] = std::move(next);
  }
}

HomotopyField solve_impl(const PathFamily& fam, bool parallel) {
  if (fam.n_eps < 3)
    throw std::invalid_argument("family grid too coarse: n_eps >= 3 required");
  HomotopyField field;
  field.n_eps = fam.n_eps;
  field.grid = fam.grid;
  field.b.resize(fam.n_eps);
  // read-only precompute pass; the slice loop below only reads it
  const auto de = eps_derivative(fam.fiber, fam.eps_h());
  if (parallel) {
#pragma omp parallel for schedule(static)
    for (int j = 0; j < fam.n_eps; ++j) integrate_slice(fam, de, j, field.b[j]);
  } else {
    for (int j = 0; j < fam.n_eps; ++j) integrate_slice(fam, de, j, field.b[j]);
  }
  return field;
}

}  // namespace

HomotopyField solve_homotopy_equation(const PathFamily& fam) {
  return solve_impl(fam, true);
}

HomotopyField solve_homotopy_equation_serial(const PathFamily& fam) {
  return solve_impl(fam, false);
}

HomotopyDecision is_homotopic_along_family(const PathFamily& fam, double tol) {
  double drift = fam.endpoint_drift();
  double path_tol = default_path_tol(fam.grid);
  if (drift > path_tol)
    throw std::invalid_argument(
        "family base endpoints are not fixed in eps (drift " +
        std::to_string(drift) + ")");
  HomotopyField field = solve_homotopy_equation(fam);
  HomotopyDecision d;
  d.tol = tol;
  d.profile = field.end_profile();
  d.max_end_defect = field.max_end_norm();
  d.homotopic = d.max_end_defect < tol;
  return d;
}

PathFamily linear_family(const APath& p, const APath& q, int n_eps) {
  if (p.algebroid != q.algebroid || p.grid.n_t != q.grid.n_t)
    throw std::invalid_argument("paths must share algebroid and grid");
  const Algebroid& A = *p.algebroid;
  // interpolated slices are A-paths only when the anchor plays no role
  bool anchor_free = A.dim() == 0;
  if (!anchor_free) {
    double worst = 0.0;
    for (int k = 0; k < p.grid.n_t; ++k) {
      worst = std::max(worst, norm_inf(A.anchor_apply(p.base[k], p.fiber[k])));
      worst = std::max(worst, norm_inf(A.anchor_apply(q.base[k], q.fiber[k])));
    }
    anchor_free = worst < 1e-12;
  }
  if (!anchor_free)
    throw std::invalid_argument(
        "linear interpolation family requires a vanishing anchor along both "
        "paths or a point base");
  PathFamily fam;
  fam.algebroid = p.algebroid;
  fam.n_eps = n_eps;
  fam.grid = p.grid;
  fam.base.resize(n_eps);
  fam.fiber.resize(n_eps);
  for (int j = 0; j < n_eps; ++j) {
    double e = static_cast<double>(j) / (n_eps - 1);
    fam.base[j].resize(p.grid.n_t);
    fam.fiber[j].resize(p.grid.n_t);
    for (int k = 0; k < p.grid.n_t; ++k) {
      fam.base[j][k] = p.base[k];  // base frozen (anchor vanishes)
      fam.fiber[j][k].resize(p.fiber[k].size());
      for (std::size_t i = 0; i < p.fiber[k].size(); ++i)
        // p + e*(q - p): identical endpoints interpolate to exactly p
        fam.fiber[j][k][i] = p.fiber[k][i] + e * (q.fiber[k][i] - p.fiber[k][i]);
    }
  }
  return fam;
}

PathFamily reparametrization_family(const APath& p, int n_eps, double strength) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  PathFamily fam;
  fam.algebroid = p.algebroid;
  fam.n_eps = n_eps;
  fam.grid = p.grid;
  fam.base.resize(n_eps);
  fam.fiber.resize(n_eps);
  for (int j = 0; j < n_eps; ++j) {
    double e = strength * static_cast<double>(j) / (n_eps - 1);
    fam.base[j].resize(p.grid.n_t);
    fam.fiber[j].resize(p.grid.n_t);
    for (int k = 0; k < p.grid.n_t; ++k) {
      double t = p.grid.node(k);
      double tau = t - e * std::sin(two_pi * t) / two_pi;
      double dtau = 1.0 - e * std::cos(two_pi * t);
      fam.base[j][k] = lerp_nodes(p.base, p.grid, tau);
      fam.fiber[j][k] = scaled(dtau, lerp_nodes(p.fiber, p.grid, tau));
    }
  }
  return fam;
}

PathFamily family_from_fiber_field(const Algebroid& algebroid, const Vec& x0,
                                   const std::vector<std::vector<Vec>>& fiber,
                                   TimeGrid grid) {
  PathFamily fam;
  fam.algebroid = &algebroid;
  fam.n_eps = static_cast<int>(fiber.size());
  fam.grid = grid;
  fam.fiber = fiber;
  fam.base.resize(fam.n_eps);
  for (int j = 0; j < fam.n_eps; ++j)
    fam.base[j] = solve_base_path(algebroid, x0, fiber[j], grid).base;
  return fam;
}

}  // namespace apaths
