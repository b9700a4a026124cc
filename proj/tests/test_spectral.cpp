#include <doctest.h>

#include <random>

#include <whisk/error.hpp>
#include <whisk/spectral.hpp>

#include "support/oracles.hpp"

using namespace whisk;

namespace {

template <class F>
Errc code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected whisk::Error");
  return Errc::InvalidArgument;
}

}  // namespace

TEST_CASE("eig_sym small cases") {
  const EigenSystem id = eig_sym(Matrix::Identity(3, 3));
  CHECK(id.values.isApproxToConstant(1.0));

  const EigenSystem p2 = eig_sym(oracle::path(2).matrix());
  CHECK(p2.values(0) == doctest::Approx(0.0));
  CHECK(p2.values(1) == doctest::Approx(2.0));

  const EigenSystem k3 = eig_sym(oracle::complete(3).matrix());
  CHECK(k3.values(0) == doctest::Approx(0.0));
  CHECK(k3.values(1) == doctest::Approx(3.0));
  CHECK(k3.values(2) == doctest::Approx(3.0));

  CHECK(eig_sym(Matrix(0, 0)).values.size() == 0);
}

TEST_CASE("eig_sym rejects asymmetric input") {
  Matrix a = Matrix::Identity(2, 2);
  a(0, 1) = 1e-6;
  CHECK(code_of([&] { eig_sym(a); }) == Errc::NotSymmetric);
}

TEST_CASE("eig_sym reconstruction and orthonormality on random symmetric matrices") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int t = 0; t < 1000; ++t) {
    const int n = 1 + static_cast<int>(rng() % 50);
    Matrix a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j <= i; ++j) a(i, j) = a(j, i) = u(rng);
    const EigenSystem es = eig_sym(a);
    const Matrix recon = es.vectors * es.values.asDiagonal() * es.vectors.transpose();
    const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    REQUIRE((recon - a).cwiseAbs().maxCoeff() <= 1e-9 * scale);
    REQUIRE((es.vectors.transpose() * es.vectors - Matrix::Identity(n, n)).cwiseAbs().maxCoeff() <= 1e-9);
    for (int i = 1; i < n; ++i) REQUIRE(es.values(i - 1) <= es.values(i));
    if (n <= 10) {
      const auto ref = oracle::jacobi_eigenvalues(a);
      REQUIRE(oracle::multiset_distance(ref, {es.values.data(), es.values.data() + n}) < 1e-10);
    }
  }
}

TEST_CASE("eigenvalue grouping") {
  Vector v(5);
  v << 0.0, 3.0, 3.0 + 1e-9, 4.0, 5.0;
  const auto g = eigenvalue_groups(v);
  REQUIRE(g.size() == 4);
  CHECK(g[1].first == 1);
  CHECK(g[1].dimension() == 2);
  CHECK(multiplicity_tolerance(v) == doctest::Approx(5e-7));
}

TEST_CASE("lambda2") {
  CHECK(lambda2(oracle::path(3)) == doctest::Approx(1.0));
  CHECK(lambda2(laplacian_from_edge_list({}, 2)) == doctest::Approx(0.0));
  CHECK(lambda2(oracle::complete(3)) == doctest::Approx(3.0));
  CHECK(code_of([] { lambda2(Laplacian::single_node()); }) == Errc::InvalidArgument);
}

TEST_CASE("lambda2 is positive exactly for connected graphs") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 400; ++t) {
    const int n = 2 + static_cast<int>(rng() % 10);
    const auto edges = oracle::random_edges(rng, n, 0.25);
    const double l2 = lambda2(laplacian_from_edge_list(edges, n));
    REQUIRE((l2 > 1e-10) == oracle::connected(n, edges));
  }
}

TEST_CASE("grounded laplacian") {
  CHECK(grounded_laplacian(oracle::path(2), 1) == Matrix::Constant(1, 1, 1.0));
  Matrix p3(2, 2);
  p3 << 2, -1, -1, 1;
  CHECK(grounded_laplacian(oracle::path(3), 1) == p3);
  Matrix k3(2, 2);
  k3 << 2, -1, -1, 2;
  CHECK(grounded_laplacian(oracle::complete(3), 2) == k3);
  CHECK(code_of([] { grounded_laplacian(oracle::path(3), 4); }) == Errc::IndexOutOfBounds);
  CHECK(code_of([] { grounded_laplacian(oracle::path(3), 0); }) == Errc::IndexOutOfBounds);
}

TEST_CASE("gramian") {
  const GramianResult p2 = gramian(oracle::path(2));
  CHECK(p2.P(0, 0) == doctest::Approx(0.5));
  CHECK(p2.trace == doctest::Approx(0.5));

  const GramianResult p3 = gramian(oracle::path(3));
  Matrix expected(2, 2);
  expected << 0.5, 0.5, 0.5, 1.0;
  CHECK((p3.P - expected).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(p3.trace == doctest::Approx(1.5));

  const std::vector<Edge> e{{1, 2}};
  CHECK(code_of([&] { gramian(laplacian_from_edge_list(e, 3)); }) == Errc::SingularGroundedLaplacian);
}

TEST_CASE("gramian residual and trace on random connected graphs") {
  std::mt19937_64 rng(9);
  for (int t = 0; t < 60; ++t) {
    const int n = 2 + static_cast<int>(rng() % 39);
    const Laplacian L = oracle::random_connected(rng, n, 0.3);
    const int ground = 1 + static_cast<int>(rng() % n);
    const GramianResult g = gramian(L, ground);
    REQUIRE(g.residual <= 1e-8);
    if (n <= 12) {
      const Matrix inv = oracle::gauss_jordan_inverse(grounded_laplacian(L, ground));
      REQUIRE(g.trace == doctest::Approx(0.5 * inv.trace()).epsilon(1e-10));
    }
  }
}

TEST_CASE("trace_power") {
  Matrix a(2, 2);
  a << 2, -1, -1, 1;
  CHECK(trace_power(a, -1.0) == doctest::Approx(3.0));
  for (double p : {-2.0, -0.5, 0.0, 0.5, 1.0, 3.7}) CHECK(trace_power(Matrix::Identity(4, 4), p) == doctest::Approx(4.0));
  CHECK(trace_power(Matrix(0, 0), -1.0) == 0.0);

  CHECK(code_of([] { trace_power(oracle::path(3).matrix(), -1.0); }) == Errc::SingularForNegativePower);
  Matrix neg = Matrix::Identity(2, 2);
  neg(1, 1) = -1.0;
  CHECK(code_of([&] { trace_power(neg, 0.5); }) == Errc::NegativeEigenvalueForFractionalPower);
  CHECK(trace_power(neg, 2.0) == doctest::Approx(2.0));
}

TEST_CASE("trace_power consistency") {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 100; ++t) {
    const int n = 2 + static_cast<int>(rng() % 5);
    const Matrix a = grounded_laplacian(oracle::random_connected(rng, n + 1));
    REQUIRE(std::abs(trace_power(a, 1.0) - a.trace()) <= 1e-10);
    REQUIRE(trace_power(a, -1.0) == doctest::Approx(oracle::gauss_jordan_inverse(a).trace()).epsilon(1e-10));
    REQUIRE(trace_power(a, 0.5) == doctest::Approx(oracle::trace_power(a, 0.5)).epsilon(1e-10));
  }
}
