#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "whisk/graph.hpp"
#include "whisk/spectral.hpp"

namespace whisk {

inline constexpr double kDefaultTol = 1e-7;

/// Actuation matrix B (n x m, m >= 1, finite).
class InputMatrix {
 public:
  explicit InputMatrix(Matrix entries);

  /// Standard basis vector e_i (1-based) in R^n.
  static InputMatrix basis(int n, int i);

  int rows() const { return static_cast<int>(m_.rows()); }
  int cols() const { return static_cast<int>(m_.cols()); }
  const Matrix& matrix() const { return m_; }

 private:
  Matrix m_;
};

struct PBHWitness {
  double eigenvalue = 0.0;
  Vector vector;  // unit norm
};

struct PBHReport {
  bool controllable = true;
  std::optional<PBHWitness> witness;
};

/// Popov-Belevitch-Hautus test over eigenspaces: the pair is uncontrollable
/// iff some eigenspace basis W has rank(W^T B) < dim W. Singular values count
/// toward the rank when they exceed tol * max(1, ||B||_2).
PBHReport pbh_controllable(const Laplacian& L, const InputMatrix& B, double tol = kDefaultTol);
PBHReport pbh_controllable(const Laplacian& L, const EigenSystem& eig, const InputMatrix& B,
                           double tol = kDefaultTol);

inline constexpr int kKalmanOracleMaxNodes = 12;

/// Numerical rank of [B, LB, ..., L^{n-1}B] (singular values above
/// 1e-8 * sigma_max). Oracle for n <= 12 only.
int kalman_rank(const Laplacian& L, const InputMatrix& B);

struct LeafRoots {
  double larger = 0.0;
  double smaller = 0.0;
};

/// Roots of x^2 - (lambda + 2) x + lambda = 0: the two eigenvalues of the
/// leaf-whiskered graph generated by the eigenvalue lambda of the seed.
LeafRoots w1_eigenvalue_map(double lambda);

/// ((2-x)(1-x) - 1) ((lambda+2-x)(1-x) - 1) - (1-x)^2, whose roots in x are
/// the eigenvalues of the leaf-plus-path whiskering generated by lambda.
double w2_relation(double lambda, double x);

/// The four roots of w2_relation(lambda, .), ascending.
std::array<double, 4> w2_eigenvalue_map(double lambda);

enum class GrowthOperator { W1, W2 };

/// Which appended blocks of a whiskered graph carry the seed input b (the
/// others carry 0). W1 has one appended block, W2 has three.
struct InputPattern {
  std::vector<bool> carries_input;

  std::string label() const;
};

std::vector<InputPattern> all_input_patterns(GrowthOperator op);

/// [b; b_1; ...; b_k] with b_j = b or 0 per the pattern.
InputMatrix stack_input(const InputMatrix& b, const InputPattern& pattern);

Laplacian apply_operator(const Laplacian& L, GrowthOperator op);

/// True iff (L, b) and (op(L), stacked input) receive the same PBH verdict.
bool verify_growth_preserves_controllability(const Laplacian& L, const InputMatrix& b, GrowthOperator op,
                                             const InputPattern& pattern, double tol = kDefaultTol);

struct ClusterCheckResult {
  /// True when w is an eigenvector of B (xI - C)^{-1} B^T with eigenvalue f
  /// and x - lambda - s = f, certifying (L', [b; 0]) uncontrollable. False
  /// means the sufficient condition does not apply (inconclusive).
  bool admissible = false;
  std::optional<double> f_value;
  /// [w; (xI - C)^{-1} B^T w], normalized, when admissible.
  std::optional<Vector> witness;
  double lambda = 0.0;
};

/// Checks the cluster-attachment obstruction for an uncontrollable seed pair.
/// Requires (lambda, w) to be an eigenpair of L with w^T b = 0; throws
/// Errc::SingularShift when x I - C is singular.
ClusterCheckResult cluster_obstruction_check(const Laplacian& L, const InputMatrix& b, const ClusterSpec& cluster,
                                             double shift, const Vector& w);

}  // namespace whisk
