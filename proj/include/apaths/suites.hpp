#pragma once

#include <json.hpp>

#include "apaths/etale.hpp"
#include "apaths/homotopy.hpp"
#include "apaths/oracle.hpp"
#include "apaths/path_form.hpp"

namespace apaths {

/// One random so(3) family, linear in eps between two random A0 fiber
/// curves: max relative defect between the homotopy field b(eps,1) and the
/// finite-difference logarithmic derivative of the development endpoint.
double so3_homotopy_oracle_defect(const Algebroid& so3, int n_t, int n_eps,
                                  double amplitude, Rng& rng);

/// One random so(3)*-cotangent family: max |b| difference between solving
/// with zero Christoffels and with random polynomial Christoffels.
double connection_independence_defect(int n_t, int n_eps, double gamma_scale,
                                      Rng& rng);

/// Axiom-checker battery for one bivector: Poisson Jacobi, then anchor
/// homomorphism and section Jacobi of the cotangent algebroid.
CheckReport algebroid_check_battery(const PoissonBivector& pi, int samples,
                                    double tol, Rng& rng);

/// Multiplicativity, kernel containment (zero-Poisson and so(3)*-cotangent)
/// and the reduced-bracket oracles.
CheckReport symplectic_suite_battery(int n_t, int n_eps, int trials, int probes,
                                     Rng& rng);

/// Invariant forms, bracket closure, Jacobi, and presentation independence
/// on the Z/2-inversion model.
CheckReport etale_suite_battery(int samples, Rng& rng);

/// Zero-Poisson linear family whose foliation direction has an exactly zero
/// discrete class derivative (closed-form kernel check input).
PathFamily zero_poisson_exact_homotopy_family(const Algebroid& zero_cotangent,
                                              const Vec& x0, int n_t, int n_eps,
                                              Rng& rng);

/// so(3)*-cotangent reparametrization family from a random path.
PathFamily so3_cotangent_homotopy_family(const Algebroid& cot, int n_t,
                                         int n_eps, Rng& rng);

nlohmann::json path_to_json(const APath& p);

}  // namespace apaths
