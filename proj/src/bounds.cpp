#include "whisk/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "whisk/error.hpp"
#include "whisk/spectral.hpp"

namespace whisk {

namespace {

constexpr double kOffDiagonalTol = 1e-12;
constexpr double kEigenTol = 1e-10;

double inverse_trace(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::LLT<Matrix> llt(a);
  if (llt.info() != Eigen::Success) {
    throw Error(Errc::SingularGroundedLaplacian, "grounded block is not positive definite");
  }
  return llt.solve(Matrix::Identity(a.rows(), a.cols())).trace();
}

void require_connected(const Laplacian& L) {
  if (!L.connected()) throw Error(Errc::SingularGroundedLaplacian, "graph is disconnected");
}

// Node labels after swap_to_front(L, ground).
int relabel(int node, int ground) {
  if (node == ground) return 1;
  if (node == 1) return ground;
  return node;
}

BoundReport whisker_bound(const Laplacian& L, int ground, bool path) {
  require_connected(L);
  const int n = L.size();
  const Laplacian grown = path ? whisker_w2(swap_to_front(L, ground)) : whisker_w1(swap_to_front(L, ground));
  BoundReport r;
  r.two_trace_P = inverse_trace(grounded_laplacian(grown, 1));
  r.trace_P = 0.5 * r.two_trace_P;
  // L'[2:n] = L[2:n] + s I; the appended blocks contribute n (leaf) or 4n.
  r.constant_C = inverse_trace(principal_submatrix(grown.matrix(), NodeIndexSet::range(2, n)));
  r.bound = (path ? 4.0 : 1.0) * n + r.constant_C;
  r.slack = r.two_trace_P - r.bound;
  return r;
}

BoundReport single_attachment_bound(const Laplacian& L, int node, int ground, bool path) {
  require_connected(L);
  const int n = L.size();
  if (node < 1 || node > n) throw Error(Errc::IndexOutOfBounds, "attachment node out of range");
  const Laplacian seed = swap_to_front(L, ground);
  const double edges = path ? 2.0 : 1.0;
  const Laplacian grown = path ? attach_path2_at(seed, relabel(node, ground)) : attach_leaf_at(seed, relabel(node, ground));

  BoundReport r;
  r.attachment_node = node;
  r.two_trace_P = inverse_trace(grounded_laplacian(grown, 1));
  r.trace_P = 0.5 * r.two_trace_P;
  const Matrix base = grounded_laplacian(seed, 1);
  for (int i = 1; i <= n; ++i) {
    Matrix perturbed = base;
    const int j = relabel(i, ground);
    if (j != 1) perturbed(j - 2, j - 2) += edges;
    r.per_node_constants.push_back(inverse_trace(perturbed));
  }
  r.constant_C = *std::min_element(r.per_node_constants.begin(), r.per_node_constants.end());
  r.bound = r.constant_C + (path ? 4.0 : 1.0);
  r.slack = r.two_trace_P - r.bound;
  return r;
}

double submatrix_trace_power(const Matrix& a, const NodeIndexSet& set, double p) {
  try {
    return trace_power(principal_submatrix(a, set), p);
  } catch (const Error& e) {
    if (e.code() == Errc::SingularForNegativePower) {
      throw Error(Errc::SingularSubmatrix, "principal submatrix is singular for p < 0");
    }
    throw;
  }
}

}  // namespace

bool is_m_matrix(const Matrix& a) {
  if (a.rows() != a.cols()) return false;
  if (a.size() == 0) return true;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      if (i != j && a(i, j) > kOffDiagonalTol) return false;
    }
  }
  try {
    return eig_sym(a).values(0) >= -kEigenTol;
  } catch (const Error&) {
    return false;
  }
}

SupermodularityCheck check_trace_power_supermodularity(const Matrix& a, const NodeIndexSet& j,
                                                       const NodeIndexSet& k, double p, double slack) {
  if (p > 2.0) throw Error(Errc::InvalidArgument, "inequality direction is only known for p <= 2");
  if (!is_m_matrix(a)) throw Error(Errc::NotAnMMatrix, "matrix is not a symmetric M-matrix");

  SupermodularityCheck out;
  out.lhs = submatrix_trace_power(a, k, p) + submatrix_trace_power(a, j, p);
  out.rhs = submatrix_trace_power(a, set_union(k, j), p) + submatrix_trace_power(a, set_intersection(k, j), p);
  if (p == 0.0 || p == 1.0) {
    out.shape = SetFunctionShape::Modular;
    out.holds = std::abs(out.lhs - out.rhs) <= slack;
  } else if (p > 0.0 && p < 1.0) {
    out.shape = SetFunctionShape::Submodular;
    out.holds = out.lhs >= out.rhs - slack;
  } else {
    out.shape = SetFunctionShape::Supermodular;
    out.holds = out.lhs <= out.rhs + slack;
  }
  return out;
}

BoundReport bound_w1(const Laplacian& L, int ground) { return whisker_bound(L, ground, false); }

BoundReport bound_w2(const Laplacian& L, int ground) { return whisker_bound(L, ground, true); }

BoundReport bound_single_leaf(const Laplacian& L, int node, int ground) {
  return single_attachment_bound(L, node, ground, false);
}

BoundReport bound_single_cluster(const Laplacian& L, int node, int ground) {
  return single_attachment_bound(L, node, ground, true);
}

}  // namespace whisk
