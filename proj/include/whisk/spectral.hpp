#pragma once

#include <vector>

#include "whisk/graph.hpp"

namespace whisk {

/// Ascending eigenvalues with orthonormal eigenvectors; column i of
/// `vectors` pairs with values(i).
struct EigenSystem {
  Vector values;
  Matrix vectors;
};

/// Dense symmetric eigendecomposition. Throws Errc::NotSymmetric when
/// |a_ij - a_ji| exceeds 1e-12 * max(1, max|a|), Errc::ConvergenceFailure if
/// the QL iteration does not converge.
EigenSystem eig_sym(const Matrix& a);

/// Eigenvalues closer than this are treated as one eigenvalue:
/// 1e-7 * max(1, |largest|).
double multiplicity_tolerance(const Vector& ascending_values);

/// Half-open index ranges [first, last) of numerically equal eigenvalues,
/// chained so that consecutive gaps within a group are all below
/// multiplicity_tolerance.
struct EigenGroup {
  int first = 0;
  int last = 0;

  int dimension() const { return last - first; }
};
std::vector<EigenGroup> eigenvalue_groups(const Vector& ascending_values);

/// Second-smallest Laplacian eigenvalue. Requires at least two nodes.
double lambda2(const Laplacian& L);

/// L[K] with K = [n] \ {ground}.
Matrix grounded_laplacian(const Laplacian& L, int ground = 1);

struct GramianResult {
  Matrix P;
  double trace = 0.0;
  /// max-norm of P A + A P - I for the grounded Laplacian A.
  double residual = 0.0;
};

/// P = 1/2 L[K]^{-1}, the positive-definite solution of the grounded
/// Lyapunov equation. Throws Errc::SingularGroundedLaplacian if lambda2 <= 1e-10.
GramianResult gramian(const Laplacian& L, int ground = 1);

/// Tr A^p via eigenvalues. Tr of a 0x0 matrix is 0 for every p.
/// p < 0 requires min eigenvalue > 1e-10; fractional p > 0 requires
/// min eigenvalue >= -1e-10 (tiny negatives are clamped to zero).
double trace_power(const Matrix& a, double p);

}  // namespace whisk
