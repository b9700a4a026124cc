#include "whisk/graph.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>
#include <sstream>
#include <string>
#include <utility>

#include "whisk/error.hpp"

namespace whisk {

namespace {

constexpr double kRowSumTol = 1e-12;

std::string entry_name(Eigen::Index i, Eigen::Index j) {
  std::ostringstream os;
  os << "(" << i + 1 << "," << j + 1 << ")";
  return os.str();
}

void require_node(int node, int n, const char* what) {
  if (node < 1 || node > n) {
    throw Error(Errc::IndexOutOfBounds,
                std::string(what) + " " + std::to_string(node) + " outside [1," +
                    std::to_string(n) + "]");
  }
}

}  // namespace

void validate_laplacian(const Matrix& m) {
  if (m.rows() != m.cols()) throw Error(Errc::NotALaplacian, "matrix is not square");
  if (m.rows() == 0) throw Error(Errc::NotALaplacian, "empty matrix");
  const Eigen::Index n = m.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    double row_sum = 0.0;
    int off_diagonal_edges = 0;
    for (Eigen::Index j = 0; j < n; ++j) {
      const double a = m(i, j);
      if (!std::isfinite(a)) throw Error(Errc::NotALaplacian, "non-finite entry " + entry_name(i, j));
      row_sum += a;
      if (i == j) continue;
      if (a != m(j, i)) throw Error(Errc::NotALaplacian, "asymmetric entry " + entry_name(i, j));
      if (a == -1.0) {
        ++off_diagonal_edges;
      } else if (a != 0.0) {
        throw Error(Errc::NotALaplacian, "off-diagonal entry " + entry_name(i, j) + " not in {0,-1}");
      }
    }
    if (std::abs(row_sum) > kRowSumTol) {
      throw Error(Errc::NotALaplacian, "row " + std::to_string(i + 1) + " sums to " + std::to_string(row_sum));
    }
    if (m(i, i) != off_diagonal_edges) {
      throw Error(Errc::NotALaplacian, "diagonal of row " + std::to_string(i + 1) + " is not the degree");
    }
  }
}

bool is_laplacian(const Matrix& m) {
  try {
    validate_laplacian(m);
    return true;
  } catch (const Error&) {
    return false;
  }
}

Laplacian Laplacian::from_matrix(Matrix m) {
  validate_laplacian(m);
  return Laplacian(std::move(m));
}

int Laplacian::degree(int node) const {
  require_node(node, size(), "node");
  return static_cast<int>(m_(node - 1, node - 1));
}

std::vector<Edge> Laplacian::edges() const {
  std::vector<Edge> out;
  for (int i = 0; i < size(); ++i) {
    for (int j = i + 1; j < size(); ++j) {
      if (m_(i, j) != 0.0) out.push_back({i + 1, j + 1});
    }
  }
  return out;
}

bool Laplacian::connected() const {
  const int n = size();
  std::vector<char> seen(n, 0);
  std::queue<int> frontier;
  frontier.push(0);
  seen[0] = 1;
  int reached = 1;
  while (!frontier.empty()) {
    const int u = frontier.front();
    frontier.pop();
    for (int v = 0; v < n; ++v) {
      if (v != u && m_(u, v) != 0.0 && !seen[v]) {
        seen[v] = 1;
        ++reached;
        frontier.push(v);
      }
    }
  }
  return reached == n;
}

NodeIndexSet::NodeIndexSet(std::vector<int> indices) : indices_(std::move(indices)) {
  std::sort(indices_.begin(), indices_.end());
  if (std::adjacent_find(indices_.begin(), indices_.end()) != indices_.end()) {
    throw Error(Errc::InvalidArgument, "duplicate index in node set");
  }
  if (!indices_.empty() && indices_.front() < 1) {
    throw Error(Errc::IndexOutOfBounds, "node indices are 1-based");
  }
}

NodeIndexSet NodeIndexSet::range(int first, int last) {
  std::vector<int> idx;
  for (int i = first; i <= last; ++i) idx.push_back(i);
  return NodeIndexSet(std::move(idx));
}

bool NodeIndexSet::contains(int index) const {
  return std::binary_search(indices_.begin(), indices_.end(), index);
}

bool NodeIndexSet::subset_of(const NodeIndexSet& other) const {
  return std::includes(other.indices_.begin(), other.indices_.end(), indices_.begin(), indices_.end());
}

NodeIndexSet set_union(const NodeIndexSet& a, const NodeIndexSet& b) {
  NodeIndexSet out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out.indices_));
  return out;
}

NodeIndexSet set_intersection(const NodeIndexSet& a, const NodeIndexSet& b) {
  NodeIndexSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out.indices_));
  return out;
}

ClusterSpec leaf_cluster(int n) {
  return ClusterSpec{1, -Matrix::Identity(n, n), Matrix::Identity(n, n)};
}

ClusterSpec path2_cluster(int n) {
  const Matrix I = Matrix::Identity(n, n);
  ClusterSpec c;
  c.s = 2;
  c.B = Matrix::Zero(n, 3 * n);
  c.B.block(0, 0, n, n) = -I;
  c.B.block(0, n, n, n) = -I;
  c.C = Matrix::Zero(3 * n, 3 * n);
  c.C.block(0, 0, n, n) = I;
  c.C.block(n, n, n, n) = 2 * I;
  c.C.block(n, 2 * n, n, n) = -I;
  c.C.block(2 * n, n, n, n) = -I;
  c.C.block(2 * n, 2 * n, n, n) = I;
  return c;
}

Laplacian laplacian_from_edge_list(std::span<const Edge> edges, int n) {
  if (n < 1) throw Error(Errc::InvalidArgument, "node count must be positive");
  Matrix m = Matrix::Zero(n, n);
  std::set<std::pair<int, int>> seen;
  for (const Edge& e : edges) {
    require_node(e.u, n, "edge endpoint");
    require_node(e.v, n, "edge endpoint");
    if (e.u == e.v) throw Error(Errc::SelfLoop, "self-loop at node " + std::to_string(e.u));
    const auto key = std::minmax(e.u, e.v);
    if (!seen.insert(key).second) {
      throw Error(Errc::DuplicateEdge,
                  "edge " + std::to_string(key.first) + "-" + std::to_string(key.second) + " repeated");
    }
    const int a = e.u - 1;
    const int b = e.v - 1;
    m(a, b) = m(b, a) = -1.0;
    m(a, a) += 1.0;
    m(b, b) += 1.0;
  }
  return Laplacian::from_matrix(std::move(m));
}

Laplacian whisker_w1(const Laplacian& L) { return attach_cluster(L, leaf_cluster(L.size())); }

Laplacian whisker_w2(const Laplacian& L) { return attach_cluster(L, path2_cluster(L.size())); }

Laplacian attach_cluster(const Laplacian& L, const ClusterSpec& cluster) {
  const int n = L.size();
  const int r = cluster.r();
  if (cluster.C.cols() != r || cluster.B.rows() != n || cluster.B.cols() != r) {
    throw Error(Errc::DimensionMismatch, "cluster blocks do not match an n=" + std::to_string(n) + " graph");
  }
  Matrix m(n + r, n + r);
  m.topLeftCorner(n, n) = L.matrix() + cluster.s * Matrix::Identity(n, n);
  m.topRightCorner(n, r) = cluster.B;
  m.bottomLeftCorner(r, n) = cluster.B.transpose();
  m.bottomRightCorner(r, r) = cluster.C;
  return Laplacian::from_matrix(std::move(m));
}

Laplacian attach_leaf_at(const Laplacian& L, int node) {
  const int n = L.size();
  require_node(node, n, "attachment node");
  Matrix m = Matrix::Zero(n + 1, n + 1);
  m.topLeftCorner(n, n) = L.matrix();
  m(node - 1, node - 1) += 1.0;
  m(node - 1, n) = m(n, node - 1) = -1.0;
  m(n, n) = 1.0;
  return Laplacian::from_matrix(std::move(m));
}

Laplacian attach_path2_at(const Laplacian& L, int node) {
  const int n = L.size();
  require_node(node, n, "attachment node");
  Matrix m = Matrix::Zero(n + 3, n + 3);
  m.topLeftCorner(n, n) = L.matrix();
  const int i = node - 1;
  m(i, i) += 2.0;
  m(i, n) = m(n, i) = -1.0;
  m(i, n + 1) = m(n + 1, i) = -1.0;
  m(n + 1, n + 2) = m(n + 2, n + 1) = -1.0;
  m(n, n) = 1.0;
  m(n + 1, n + 1) = 2.0;
  m(n + 2, n + 2) = 1.0;
  return Laplacian::from_matrix(std::move(m));
}

Laplacian swap_to_front(const Laplacian& L, int node) {
  require_node(node, L.size(), "node");
  if (node == 1) return L;
  Eigen::PermutationMatrix<Eigen::Dynamic> perm(L.size());
  perm.setIdentity();
  perm.applyTranspositionOnTheRight(0, node - 1);
  Matrix m = perm.transpose() * L.matrix() * perm;
  return Laplacian::from_matrix(std::move(m));
}

Matrix principal_submatrix(const Matrix& a, const NodeIndexSet& keep) {
  if (keep.max() > a.rows()) {
    throw Error(Errc::IndexOutOfBounds,
                "index " + std::to_string(keep.max()) + " exceeds matrix order " + std::to_string(a.rows()));
  }
  const int k = keep.size();
  Matrix out(k, k);
  for (int r = 0; r < k; ++r) {
    for (int c = 0; c < k; ++c) out(r, c) = a(keep.indices()[r] - 1, keep.indices()[c] - 1);
  }
  return out;
}

}  // namespace whisk
