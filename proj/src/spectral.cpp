#include "whisk/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "whisk/error.hpp"

namespace whisk {

namespace {

constexpr double kSymmetryTol = 1e-12;
constexpr double kConnectedTol = 1e-10;
constexpr double kDefiniteTol = 1e-10;

}  // namespace

EigenSystem eig_sym(const Matrix& a) {
  if (a.rows() != a.cols()) throw Error(Errc::DimensionMismatch, "eig_sym needs a square matrix");
  if (a.size() == 0) return {};
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > kSymmetryTol * scale) {
    throw Error(Errc::NotSymmetric, "matrix is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw Error(Errc::ConvergenceFailure, "symmetric eigensolver did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

double multiplicity_tolerance(const Vector& values) {
  const double top = values.size() ? values.cwiseAbs().maxCoeff() : 0.0;
  return 1e-7 * std::max(1.0, top);
}

std::vector<EigenGroup> eigenvalue_groups(const Vector& values) {
  std::vector<EigenGroup> groups;
  const int n = static_cast<int>(values.size());
  const double tol = multiplicity_tolerance(values);
  int first = 0;
  for (int i = 1; i <= n; ++i) {
    if (i == n || values(i) - values(i - 1) > tol) {
      groups.push_back({first, i});
      first = i;
    }
  }
  return groups;
}

double lambda2(const Laplacian& L) {
  if (L.size() < 2) throw Error(Errc::InvalidArgument, "lambda2 needs at least two nodes");
  return eig_sym(L.matrix()).values(1);
}

Matrix grounded_laplacian(const Laplacian& L, int ground) {
  if (ground < 1 || ground > L.size()) {
    throw Error(Errc::IndexOutOfBounds, "ground node " + std::to_string(ground) + " out of range");
  }
  std::vector<int> keep;
  for (int i = 1; i <= L.size(); ++i) {
    if (i != ground) keep.push_back(i);
  }
  return principal_submatrix(L.matrix(), NodeIndexSet(std::move(keep)));
}

GramianResult gramian(const Laplacian& L, int ground) {
  const Matrix A = grounded_laplacian(L, ground);
  GramianResult out;
  if (A.size() == 0) {
    out.P = A;
    return out;
  }
  if (lambda2(L) <= kConnectedTol) {
    throw Error(Errc::SingularGroundedLaplacian, "graph is disconnected");
  }
  Eigen::LLT<Matrix> llt(A);
  if (llt.info() != Eigen::Success) {
    throw Error(Errc::SingularGroundedLaplacian, "grounded Laplacian is not positive definite");
  }
  out.P = 0.5 * llt.solve(Matrix::Identity(A.rows(), A.cols()));
  out.P = 0.5 * (out.P + out.P.transpose()).eval();
  out.trace = out.P.trace();
  out.residual = (out.P * A + A * out.P - Matrix::Identity(A.rows(), A.cols())).cwiseAbs().maxCoeff();
  return out;
}

double trace_power(const Matrix& a, double p) {
  if (a.size() == 0) return 0.0;
  const Vector values = eig_sym(a).values;
  const double smallest = values(0);
  const bool integral = std::floor(p) == p;
  if (p < 0.0 && smallest <= kDefiniteTol) {
    throw Error(Errc::SingularForNegativePower, "negative power of a singular matrix");
  }
  if (!integral && smallest < -kDefiniteTol) {
    throw Error(Errc::NegativeEigenvalueForFractionalPower, "fractional power of an indefinite matrix");
  }
  double sum = 0.0;
  for (double v : values) {
    if (!integral) v = std::max(v, 0.0);
    sum += std::pow(v, p);
  }
  return sum;
}

}  // namespace whisk
