#pragma once

#include <vector>

#include "whisk/graph.hpp"

namespace whisk {

/// Off-diagonals <= 1e-12 and eigenvalues >= -1e-10 (symmetric input).
bool is_m_matrix(const Matrix& a);

enum class SetFunctionShape {
  Submodular,    // lhs >= rhs, 0 <= p <= 1
  Supermodular,  // lhs <= rhs, p < 0 or 1 <= p <= 2
  Modular,       // lhs == rhs, p in {0, 1}
};

struct SupermodularityCheck {
  double lhs = 0.0;  // Tr A[K]^p + Tr A[J]^p
  double rhs = 0.0;  // Tr A[K u J]^p + Tr A[K n J]^p
  SetFunctionShape shape = SetFunctionShape::Modular;
  bool holds = false;
};

/// Evaluates the principal-submatrix trace-power inequality for an M-matrix
/// in the direction appropriate to p, allowing `slack` of numerical error.
/// Empty index sets contribute 0. Throws Errc::NotAnMMatrix,
/// Errc::SingularSubmatrix (p < 0 on a singular block) or
/// Errc::InvalidArgument (p > 2).
SupermodularityCheck check_trace_power_supermodularity(const Matrix& a, const NodeIndexSet& j,
                                                       const NodeIndexSet& k, double p, double slack = 1e-9);

/// Gramian-trace lower bound. All quantities are in the Tr(L'[K]^{-1})
/// convention: two_trace_P = 2 Tr P is compared against `bound`.
struct BoundReport {
  double trace_P = 0.0;
  double two_trace_P = 0.0;
  double bound = 0.0;
  double constant_C = 0.0;
  double slack = 0.0;  // two_trace_P - bound
  /// Single-attachment bounds only: the constant for each candidate node,
  /// constant_C being their minimum. Empty for the whiskering bounds.
  std::vector<double> per_node_constants;
  int attachment_node = 0;
};

/// Leaf whiskering: 2 Tr P' >= n + Tr([L[K] + I]^{-1}), K = [n] \ {ground}.
BoundReport bound_w1(const Laplacian& L, int ground = 1);

/// Leaf-plus-path whiskering: 2 Tr P' >= 4n + Tr([L[K] + 2I]^{-1}).
BoundReport bound_w2(const Laplacian& L, int ground = 1);

/// One leaf attached at `node`: 2 Tr P >= C + 1 with
/// C = min_i Tr([L[K] + e_i e_i^T]^{-1}); the perturbation is absent for i = ground.
BoundReport bound_single_leaf(const Laplacian& L, int node, int ground = 1);

/// One leaf-plus-path cluster attached at `node`: 2 Tr P >= C + 4 with
/// C = min_i Tr([L[K] + 2 e_i e_i^T]^{-1}).
BoundReport bound_single_cluster(const Laplacian& L, int node, int ground = 1);

}  // namespace whisk
