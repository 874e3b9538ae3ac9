#include "apaths/oracle.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace apaths {

std::vector<Mat> so3_generators() {
  std::vector<Mat> gens(3, Mat(3));
  auto eps = [](int i, int j, int k) -> double {
    return ((i - j) * (j - k) * (k - i)) / 2.0;
  };
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) gens[i](j, k) = -eps(i, j, k);
  return gens;
}

MatrixGroupElement development_map(const APath& p,
                                   const std::vector<Mat>& generators,
                                   GroupTag tag) {
  if (static_cast<int>(generators.size()) != p.algebroid->rank())
    throw std::invalid_argument("need one generator per fiber coordinate");
  const int d = generators[0].d;
  const TimeGrid grid = p.grid;
  const double h = grid.h();
  auto represent = [&](double t) {
    Vec a = lerp_nodes(p.fiber, grid, t);
    Mat m(d);
    for (std::size_t i = 0; i < generators.size(); ++i)
      if (a[i] != 0.0)
        for (std::size_t e = 0; e < m.a.size(); ++e)
          m.a[e] += a[i] * generators[i].a[e];
    return m;
  };
  Mat g = Mat::identity(d);
  for (int k = 0; k + 1 < grid.n_t; ++k) {
    double t = grid.node(k);
    Mat a1 = represent(t);
    Mat a2 = represent(t + 0.5 * h);
    Mat a4 = represent(t + h);
    Mat k1 = a1 * g;
    Mat k2 = a2 * (g + 0.5 * h * k1);
    Mat k3 = a2 * (g + 0.5 * h * k2);
    Mat k4 = a4 * (g + h * k3);
    g = g + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (tag == GroupTag::Orthogonal) g = project_orthogonal(g);
  }
  return MatrixGroupElement{g, tag};
}

Vec so3_coefficients(const Mat& omega) {
  Mat a(3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) a(i, j) = 0.5 * (omega(i, j) - omega(j, i));
  return {a(2, 1), a(0, 2), a(1, 0)};
}

Vec trapezoid_fiber_integral(const APath& p) {
  const double h = p.grid.h();
  Vec acc(p.fiber[0].size(), 0.0);
  for (int k = 0; k < p.grid.n_t; ++k) {
    double w = (k == 0 || k == p.grid.n_t - 1) ? 0.5 * h : h;
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += w * p.fiber[k][i];
  }
  return acc;
}

FiberwiseCotangentClass zero_poisson_class(const APath& p) {
  const Algebroid& A = *p.algebroid;
  for (int j = 0; j < A.dim(); ++j)
    for (int i = 0; i < A.rank(); ++i)
      if (!A.anchor_entry(j, i).is_zero_literal())
        throw std::invalid_argument(
            "zero_poisson_class requires the zero-bivector cotangent algebroid");
  return {p.base.front(), trapezoid_fiber_integral(p)};
}

PairGroupoidClass pair_groupoid_class(const APath& p) {
  const Algebroid& A = *p.algebroid;
  // pi constant and invertible: anchor entries constant, matrix nonsingular
  Vec origin(A.dim(), 0.0);
  std::vector<double> m0 = A.anchor_at(origin);
  Mat m(A.dim());
  m.a = m0;
  try {
    (void)inverse(m);
  } catch (const std::runtime_error&) {
    throw std::invalid_argument("pair_groupoid_class requires invertible pi");
  }
  return {p.base.front(), p.base.back()};
}

namespace {

double class_distance(const FiberwiseCotangentClass& a,
                      const FiberwiseCotangentClass& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.base_point.size(); ++i)
    m = std::max(m, std::abs(a.base_point[i] - b.base_point[i]));
  for (std::size_t i = 0; i < a.integral.size(); ++i)
    m = std::max(m, std::abs(a.integral[i] - b.integral[i]));
  return m;
}

// Shift a fiber curve by a multiple of the sin^2 envelope so its discrete
// trapezoid integral matches `target` exactly, componentwise.
void match_integral(std::vector<Vec>& fiber, TimeGrid grid, const Vec& target) {
  const double h = grid.h();
  std::vector<double> env(grid.n_t);
  double env_int = 0.0;
  for (int k = 0; k < grid.n_t; ++k) {
    double s = std::sin(std::numbers::pi * grid.node(k));
    env[k] = s * s;
    env_int += ((k == 0 || k == grid.n_t - 1) ? 0.5 * h : h) * env[k];
  }
  Vec current(target.size(), 0.0);
  for (int k = 0; k < grid.n_t; ++k) {
    double w = (k == 0 || k == grid.n_t - 1) ? 0.5 * h : h;
    for (std::size_t i = 0; i < current.size(); ++i) current[i] += w * fiber[k][i];
  }
  for (std::size_t i = 0; i < target.size(); ++i) {
    double shift = (target[i] - current[i]) / env_int;
    for (int k = 0; k < grid.n_t; ++k) fiber[k][i] += shift * env[k];
  }
}

CheckReport functoriality_zero_poisson(const Algebroid& A, int suite_size,
                                       TimeGrid grid, Rng& rng) {
  CheckReport rep;
  double class_defect = 0.0;
  int agreement_failures = 0;
  const double tol = 1e-6;
  Vec x0 = A.chart().random_point(rng);
  for (int s = 0; s < suite_size; ++s) {
    auto fa = random_a0_fiber_curve(A.rank(), grid, 1.0, rng);
    auto fb = random_a0_fiber_curve(A.rank(), grid, 1.0, rng);
    APath p = solve_base_path(A, x0, fa, grid);
    APath q = solve_base_path(A, x0, fb, grid);
    auto cp = zero_poisson_class(p);
    auto cq = zero_poisson_class(q);

    // concatenation adds integrals
    APath pq = concatenate(p, q, 1e-12);
    auto cpq = zero_poisson_class(pq);
    FiberwiseCotangentClass expected{cq.base_point, cp.integral};
    for (std::size_t i = 0; i < expected.integral.size(); ++i)
      expected.integral[i] += cq.integral[i];
    class_defect = std::max(class_defect, class_distance(cpq, expected));

    // reversal negates, constants vanish
    auto crev = zero_poisson_class(reverse(p));
    FiberwiseCotangentClass neg{cp.base_point, scaled(-1.0, cp.integral)};
    class_defect = std::max(class_defect, class_distance(crev, neg));
    auto cconst = zero_poisson_class(constant_path(A, x0, grid));
    class_defect = std::max(class_defect, norm_inf(cconst.integral));

    // homotopy decision vs class equality; alternate matched and unmatched.
    // Unmatched integrals are pushed a fixed offset away so neither case sits
    // inside the gray zone of the grid-resolution decision tolerance.
    bool match = (s % 2 == 0);
    Vec target = trapezoid_fiber_integral(p);
    if (!match)
      for (double& v : target) v += 0.5;
    match_integral(fb, grid, target);
    APath q2 = solve_base_path(A, x0, fb, grid);
    PathFamily fam = linear_family(p, q2, 33);
    auto decision =
        is_homotopic_along_family(fam, default_homotopy_tol(grid.n_t, 33));
    bool classes_equal =
        class_distance(zero_poisson_class(p), zero_poisson_class(q2)) < tol;
    if (decision.homotopic != classes_equal) ++agreement_failures;
  }
  rep.add("zero_poisson_class_laws", class_defect, tol);
  rep.add("zero_poisson_homotopy_agreement",
          static_cast<double>(agreement_failures), 0.5);
  return rep;
}

CheckReport functoriality_development(const Algebroid& A, int suite_size,
                                      TimeGrid grid, Rng& rng) {
  CheckReport rep;
  auto gens = so3_generators();
  double law_defect = 0.0;
  double invariance_defect = 0.0;
  for (int s = 0; s < suite_size; ++s) {
    auto fa = random_a0_fiber_curve(A.rank(), grid, 1.0, rng);
    auto fb = random_a0_fiber_curve(A.rank(), grid, 1.0, rng);
    APath p{&A, grid, std::vector<Vec>(grid.n_t, Vec{}), fa};
    APath q{&A, grid, std::vector<Vec>(grid.n_t, Vec{}), fb};
    Mat gp = development_map(p, gens).g;
    Mat gq = development_map(q, gens).g;
    Mat gpq = development_map(concatenate(p, q, 1e-12), gens).g;
    law_defect = std::max(law_defect, (gpq - gp * gq).norm_inf());
    Mat grev = development_map(reverse(p), gens).g;
    law_defect = std::max(law_defect, (grev - gp.transpose()).norm_inf());
    Mat gc = development_map(constant_path(A, {}, grid), gens).g;
    law_defect = std::max(law_defect, (gc - Mat::identity(3)).norm_inf());

    // development endpoint is invariant along a homotopy family
    PathFamily fam = reparametrization_family(p, 9);
    for (int j = 1; j < fam.n_eps; ++j) {
      Mat gj = development_map(fam.slice(j), gens).g;
      invariance_defect = std::max(invariance_defect, (gj - gp).norm_inf());
    }
  }
  rep.add("development_groupoid_laws", law_defect, 1e-6);
  rep.add("development_homotopy_invariance", invariance_defect,
          std::max(1e-6, 10.0 * grid.h() * grid.h()));
  return rep;
}

CheckReport functoriality_pair(const Algebroid& A, int suite_size,
                               TimeGrid grid, Rng& rng) {
  CheckReport rep;
  double defect = 0.0;
  for (int s = 0; s < suite_size; ++s) {
    Vec x0(A.dim());
    for (int i = 0; i < A.dim(); ++i) x0[i] = rng.uniform(-0.2, 0.2);
    auto fa = random_a0_fiber_curve(A.rank(), grid, 0.3, rng);
    APath p = solve_base_path(A, x0, fa, grid);
    auto cls = pair_groupoid_class(p);
    // concatenate with a path q ending at p's source
    auto fb = random_a0_fiber_curve(A.rank(), grid, 0.3, rng);
    APath q_raw = solve_base_path(A, x0, fb, grid);
    // shift q so that target(q) = source(p) = x0: translate its base curve
    APath q = q_raw;
    Vec offset(A.dim());
    for (int i = 0; i < A.dim(); ++i) offset[i] = x0[i] - q_raw.base.back()[i];
    for (auto& pt : q.base)
      for (int i = 0; i < A.dim(); ++i) pt[i] += offset[i];
    APath pq = concatenate(p, q, 1e-9);
    auto cpq = pair_groupoid_class(pq);
    auto cq = pair_groupoid_class(q);
    for (int i = 0; i < A.dim(); ++i) {
      defect = std::max(defect, std::abs(cpq.source[i] - cq.source[i]));
      defect = std::max(defect, std::abs(cpq.target[i] - cls.target[i]));
    }
    auto crev = pair_groupoid_class(reverse(p));
    for (int i = 0; i < A.dim(); ++i) {
      defect = std::max(defect, std::abs(crev.source[i] - cls.target[i]));
      defect = std::max(defect, std::abs(crev.target[i] - cls.source[i]));
    }
  }
  rep.add("pair_groupoid_class_laws", defect, 1e-9);
  return rep;
}

}  // namespace

CheckReport check_oracle_functoriality(const Algebroid& algebroid,
                                       OracleFamily family, int suite_size,
                                       TimeGrid grid, Rng& rng) {
  switch (family) {
    case OracleFamily::ZeroPoisson:
      return functoriality_zero_poisson(algebroid, suite_size, grid, rng);
    case OracleFamily::Development:
      return functoriality_development(algebroid, suite_size, grid, rng);
    case OracleFamily::PairGroupoid:
      return functoriality_pair(algebroid, suite_size, grid, rng);
  }
  throw std::invalid_argument("unknown oracle family");
}

}  // namespace apaths
