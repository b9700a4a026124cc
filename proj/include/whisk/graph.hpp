#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace whisk {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Undirected edge between two 1-based node indices.
struct Edge {
  int u = 0;
  int v = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Combinatorial Laplacian of an unweighted simple graph.
///
/// Instances are only produced through validating factories, so every
/// Laplacian in circulation is symmetric, has zero row sums, off-diagonal
/// entries in {0, -1} and node degrees on the diagonal. Node indices in the
/// public interface are 1-based.
class Laplacian {
 public:
  /// Single isolated node.
  Laplacian() : m_(Matrix::Zero(1, 1)) {}

  /// Validates `m` and throws Errc::NotALaplacian on any violation.
  static Laplacian from_matrix(Matrix m);

  static Laplacian single_node() { return Laplacian(); }

  int size() const { return static_cast<int>(m_.rows()); }
  const Matrix& matrix() const { return m_; }

  int degree(int node) const;

  /// Edges with u < v, sorted lexicographically.
  std::vector<Edge> edges() const;

  /// Breadth-first connectivity. A single node counts as connected.
  bool connected() const;

  friend bool operator==(const Laplacian& a, const Laplacian& b) { return a.m_ == b.m_; }

 private:
  explicit Laplacian(Matrix m) : m_(std::move(m)) {}

  Matrix m_;
};

/// Throws Errc::NotALaplacian with the first violated invariant.
void validate_laplacian(const Matrix& m);
bool is_laplacian(const Matrix& m);

/// Sorted set of distinct 1-based indices.
class NodeIndexSet {
 public:
  NodeIndexSet() = default;
  /// Sorts the input; rejects duplicates and indices below 1.
  explicit NodeIndexSet(std::vector<int> indices);

  /// {first, first+1, ..., last}; empty when last < first.
  static NodeIndexSet range(int first, int last);

  const std::vector<int>& indices() const { return indices_; }
  int size() const { return static_cast<int>(indices_.size()); }
  bool empty() const { return indices_.empty(); }
  bool contains(int index) const;
  bool subset_of(const NodeIndexSet& other) const;
  int max() const { return indices_.empty() ? 0 : indices_.back(); }

  auto begin() const { return indices_.begin(); }
  auto end() const { return indices_.end(); }

  friend NodeIndexSet set_union(const NodeIndexSet& a, const NodeIndexSet& b);
  friend NodeIndexSet set_intersection(const NodeIndexSet& a, const NodeIndexSet& b);
  friend bool operator==(const NodeIndexSet&, const NodeIndexSet&) = default;

 private:
  std::vector<int> indices_;
};

/// Block data describing attachment of one identical cluster per node:
///   L' = [[L + s I, B], [B^T, C]].
/// No invariants are enforced on construction; attach_cluster validates the
/// assembled matrix.
struct ClusterSpec {
  int s = 0;
  Matrix B;
  Matrix C;

  int r() const { return static_cast<int>(C.rows()); }
};

/// s = 1, B = -I, C = I: one leaf per node.
ClusterSpec leaf_cluster(int n);

/// s = 2, B = [-I, -I, 0], C = [[I, 0, 0], [0, 2I, -I], [0, -I, I]]: one leaf
/// and one 2-path per node, blocks ordered (leaves, path-node-1, path-node-2).
ClusterSpec path2_cluster(int n);

Laplacian laplacian_from_edge_list(std::span<const Edge> edges, int n);

/// [[L + I, -I], [-I, I]]; node n + i is the leaf of node i.
Laplacian whisker_w1(const Laplacian& L);

/// 4n x 4n leaf-plus-path whiskering. Block order: original nodes, leaves,
/// first path nodes, second path nodes.
Laplacian whisker_w2(const Laplacian& L);

Laplacian attach_cluster(const Laplacian& L, const ClusterSpec& cluster);

/// Appends node n + 1 joined to `node` only.
Laplacian attach_leaf_at(const Laplacian& L, int node);

/// Appends nodes n+1 (leaf), n+2 and n+3 (a 2-path) with edges
/// (node, n+1), (node, n+2), (n+2, n+3).
Laplacian attach_path2_at(const Laplacian& L, int node);

/// Relabels so that `node` becomes node 1 and the old node 1 takes its index.
Laplacian swap_to_front(const Laplacian& L, int node);

/// A[K]: rows and columns of `a` listed in `keep`, ascending. An empty set
/// yields a 0x0 matrix.
Matrix principal_submatrix(const Matrix& a, const NodeIndexSet& keep);

}  // namespace whisk
