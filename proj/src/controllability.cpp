#include "whisk/controllability.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "whisk/error.hpp"

namespace whisk {

namespace {

constexpr double kKalmanRankTol = 1e-8;
constexpr double kObstructionTol = 1e-7;
constexpr double kShiftTol = 1e-10;

// Bisection on a sign-changing bracket down to adjacent doubles.
template <typename F>
double bisect(F&& f, double lo, double hi, double f_lo) {
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double f_mid = f(mid);
    if (f_mid == 0.0) return mid;
    if ((f_mid < 0.0) == (f_lo < 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::vector<double> scan_roots(double lambda, int intervals) {
  auto f = [lambda](double x) { return w2_relation(lambda, x); };
  // Every root is a Laplacian eigenvalue, hence in [0, lambda + 4]; the scan
  // starts slightly below zero so an exact zero root sits inside a bracket.
  const double lo = -0.5;
  const double hi = lambda + 6.0;
  const double h = (hi - lo) / intervals;
  std::vector<double> roots;
  double a = lo;
  double fa = f(a);
  for (int k = 1; k <= intervals; ++k) {
    const double b = lo + k * h;
    const double fb = f(b);
    if (fa == 0.0) {
      roots.push_back(a);
    } else if (fb != 0.0 && (fa < 0.0) != (fb < 0.0)) {
      roots.push_back(bisect(f, a, b, fa));
    }
    a = b;
    fa = fb;
  }
  if (fa == 0.0) roots.push_back(a);
  return roots;
}

}  // namespace

InputMatrix::InputMatrix(Matrix entries) : m_(std::move(entries)) {
  if (m_.cols() < 1 || m_.rows() < 1) throw Error(Errc::InvalidArgument, "input matrix needs m >= 1 columns");
  if (!m_.allFinite()) throw Error(Errc::InvalidArgument, "input matrix has non-finite entries");
}

InputMatrix InputMatrix::basis(int n, int i) {
  if (i < 1 || i > n) throw Error(Errc::IndexOutOfBounds, "basis index " + std::to_string(i) + " out of range");
  Matrix e = Matrix::Zero(n, 1);
  e(i - 1, 0) = 1.0;
  return InputMatrix(std::move(e));
}

PBHReport pbh_controllable(const Laplacian& L, const InputMatrix& B, double tol) {
  return pbh_controllable(L, eig_sym(L.matrix()), B, tol);
}

PBHReport pbh_controllable(const Laplacian& L, const EigenSystem& eig, const InputMatrix& B, double tol) {
  if (B.rows() != L.size()) {
    throw Error(Errc::DimensionMismatch, "input has " + std::to_string(B.rows()) + " rows for n=" +
                                             std::to_string(L.size()));
  }
  Eigen::JacobiSVD<Matrix> b_svd(B.matrix());
  const double threshold = tol * std::max(1.0, b_svd.singularValues()(0));

  for (const EigenGroup& g : eigenvalue_groups(eig.values)) {
    const int k = g.dimension();
    const auto W = eig.vectors.middleCols(g.first, k);
    const Matrix projected = W.transpose() * B.matrix();
    Eigen::JacobiSVD<Matrix> svd(projected, Eigen::ComputeFullU);
    const Vector& sv = svd.singularValues();
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
      if (sv(i) > threshold) ++rank;
    }
    if (rank < k) {
      // The last left singular vector spans (part of) the left null space.
      Vector w = W * svd.matrixU().col(k - 1);
      w.normalize();
      PBHWitness witness{eig.values.segment(g.first, k).mean(), std::move(w)};
      return {false, std::move(witness)};
    }
  }
  return {true, std::nullopt};
}

int kalman_rank(const Laplacian& L, const InputMatrix& B) {
  const int n = L.size();
  if (n > kKalmanOracleMaxNodes) {
    throw Error(Errc::TooLargeForOracle, "Kalman rank oracle is limited to n <= 12");
  }
  if (B.rows() != n) throw Error(Errc::DimensionMismatch, "input rows do not match the graph");
  const int m = B.cols();
  // span{B, LB, ..., L^{n-1}B} equals the Krylov space of (L - cI) / c, whose
  // spectrum lies in [-1, 1] for c = max degree (Gershgorin: eig(L) <= 2c).
  // Same exact rank, far better conditioned monomial basis.
  const double c = std::max(1.0, L.matrix().diagonal().maxCoeff());
  const Matrix op = (L.matrix() - c * Matrix::Identity(n, n)) / c;
  Matrix krylov(n, n * m);
  krylov.leftCols(m) = B.matrix();
  for (int i = 1; i < n; ++i) {
    krylov.middleCols(i * m, m) = op * krylov.middleCols((i - 1) * m, m);
  }
  Eigen::JacobiSVD<Matrix> svd(krylov);
  const Vector& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  const double threshold = kKalmanRankTol * sv(0);
  return static_cast<int>((sv.array() > threshold).count());
}

LeafRoots w1_eigenvalue_map(double lambda) {
  if (lambda < 0.0) throw Error(Errc::NegativeEigenvalue, "Laplacian eigenvalues are nonnegative");
  const double larger = 0.5 * (std::sqrt(lambda * lambda + 4.0) + lambda + 2.0);
  // Product of the roots is lambda; avoids cancellation in the small root.
  return {larger, lambda / larger};
}

double w2_relation(double lambda, double x) {
  const double leaf = (2.0 - x) * (1.0 - x) - 1.0;
  const double hub = (lambda + 2.0 - x) * (1.0 - x) - 1.0;
  return leaf * hub - (1.0 - x) * (1.0 - x);
}

std::array<double, 4> w2_eigenvalue_map(double lambda) {
  if (lambda < 0.0) throw Error(Errc::NegativeEigenvalue, "Laplacian eigenvalues are nonnegative");
  std::vector<double> roots = scan_roots(lambda, 4000);
  if (roots.size() != 4) roots = scan_roots(lambda, 400000);
  if (roots.size() != 4) {
    throw Error(Errc::RootFindingFailure, "found " + std::to_string(roots.size()) + " roots for lambda=" +
                                              std::to_string(lambda));
  }
  std::array<double, 4> out{};
  std::copy(roots.begin(), roots.end(), out.begin());
  return out;
}

std::string InputPattern::label() const {
  std::string s = "[b";
  for (bool b : carries_input) s += b ? ";b" : ";0";
  return s + "]";
}

std::vector<InputPattern> all_input_patterns(GrowthOperator op) {
  const int blocks = op == GrowthOperator::W1 ? 1 : 3;
  std::vector<InputPattern> out;
  for (int mask = (1 << blocks) - 1; mask >= 0; --mask) {
    InputPattern p;
    for (int j = 0; j < blocks; ++j) p.carries_input.push_back(((mask >> (blocks - 1 - j)) & 1) != 0);
    out.push_back(std::move(p));
  }
  return out;
}

InputMatrix stack_input(const InputMatrix& b, const InputPattern& pattern) {
  const int n = b.rows();
  const int blocks = static_cast<int>(pattern.carries_input.size());
  Matrix out = Matrix::Zero(n * (blocks + 1), b.cols());
  out.topRows(n) = b.matrix();
  for (int j = 0; j < blocks; ++j) {
    if (pattern.carries_input[j]) out.middleRows(n * (j + 1), n) = b.matrix();
  }
  return InputMatrix(std::move(out));
}

Laplacian apply_operator(const Laplacian& L, GrowthOperator op) {
  return op == GrowthOperator::W1 ? whisker_w1(L) : whisker_w2(L);
}

bool verify_growth_preserves_controllability(const Laplacian& L, const InputMatrix& b, GrowthOperator op,
                                             const InputPattern& pattern, double tol) {
  const std::size_t blocks = op == GrowthOperator::W1 ? 1 : 3;
  if (pattern.carries_input.size() != blocks) {
    throw Error(Errc::DimensionMismatch, "input pattern does not match the operator");
  }
  const bool seed = pbh_controllable(L, b, tol).controllable;
  const bool grown = pbh_controllable(apply_operator(L, op), stack_input(b, pattern), tol).controllable;
  return seed == grown;
}

ClusterCheckResult cluster_obstruction_check(const Laplacian& L, const InputMatrix& b, const ClusterSpec& cluster,
                                             double shift, const Vector& w_in) {
  const int n = L.size();
  const int r = cluster.r();
  if (w_in.size() != n || b.rows() != n || cluster.B.rows() != n || cluster.B.cols() != r) {
    throw Error(Errc::DimensionMismatch, "cluster check dimensions disagree");
  }
  if (w_in.norm() == 0.0) throw Error(Errc::InvalidArgument, "w must be nonzero");
  const Vector w = w_in.normalized();

  ClusterCheckResult out;
  out.lambda = w.dot(L.matrix() * w);
  if ((L.matrix() * w - out.lambda * w).cwiseAbs().maxCoeff() > kObstructionTol) {
    throw Error(Errc::InvalidArgument, "w is not an eigenvector of L");
  }
  if ((b.matrix().transpose() * w).cwiseAbs().maxCoeff() > kObstructionTol) {
    throw Error(Errc::InvalidArgument, "w is not orthogonal to b");
  }

  const Matrix shifted = shift * Matrix::Identity(r, r) - cluster.C;
  const Vector c_values = eig_sym(cluster.C).values;
  if ((c_values.array() - shift).abs().minCoeff() <= kShiftTol) {
    throw Error(Errc::SingularShift, "shift coincides with an eigenvalue of C");
  }
  const Vector beta = shifted.partialPivLu().solve(cluster.B.transpose() * w);
  const Vector image = cluster.B * beta;
  const double f = w.dot(image);
  const bool eigenvector = (image - f * w).cwiseAbs().maxCoeff() <= kObstructionTol;
  if (!eigenvector) return out;

  out.f_value = f;
  const bool relation = std::abs(shift - out.lambda - cluster.s - f) <= kObstructionTol;
  if (relation && shift >= 0.0) {
    out.admissible = true;
    Vector witness(n + r);
    witness << w, beta;
    out.witness = witness.normalized();
  }
  return out;
}

}  // namespace whisk
