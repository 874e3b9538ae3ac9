#pragma once

#include <variant>
#include <vector>

#include "apaths/homotopy.hpp"
#include "apaths/path.hpp"
#include "apaths/smallmat.hpp"

namespace apaths {

enum class GroupTag { Orthogonal, General };

struct MatrixGroupElement {
  Mat g;
  GroupTag tag = GroupTag::General;
};

/// Homotopy class in the zero-Poisson groupoid T*M: base point plus the
/// integrated covector.
struct FiberwiseCotangentClass {
  Vec base_point;
  Vec integral;
};

/// Homotopy class in the pair groupoid of a symplectic chart.
struct PairGroupoidClass {
  Vec source;
  Vec target;
};

using OracleClass =
    std::variant<MatrixGroupElement, FiberwiseCotangentClass, PairGroupoidClass>;

/// Matrix generators of so(3): (L_i)_jk = -epsilon_ijk, [L_i, L_j] = eps_ijk L_k.
std::vector<Mat> so3_generators();

/// Solve d_t g = a(t) g with g(0) = I by RK4 (a linearly interpolated between
/// nodes, represented through the supplied generators); orthogonal projection
/// per step for GroupTag::Orthogonal.
MatrixGroupElement development_map(const APath& p, const std::vector<Mat>& generators,
                                   GroupTag tag = GroupTag::Orthogonal);

/// Extract so(3) coefficients from an antisymmetric 3x3 matrix.
Vec so3_coefficients(const Mat& omega);

/// Class map for the zero-bivector cotangent algebroid: trapezoid quadrature
/// of the fiber over [0,1] attached to the (constant) base point.
FiberwiseCotangentClass zero_poisson_class(const APath& p);

/// Class map for a constant invertible bivector: the base endpoints.
PairGroupoidClass pair_groupoid_class(const APath& p);

/// Trapezoid integral of the fiber curve.
Vec trapezoid_fiber_integral(const APath& p);

enum class OracleFamily { ZeroPoisson, Development, PairGroupoid };

/// Groupoid laws in the oracle codomain: concatenation maps to composition,
/// reversal to inversion, constant paths to identities; for ZeroPoisson also
/// checks that the homotopy decision agrees with class equality.
CheckReport check_oracle_functoriality(const Algebroid& algebroid,
                                       OracleFamily family, int suite_size,
                                       TimeGrid grid, Rng& rng);

}  // namespace apaths
