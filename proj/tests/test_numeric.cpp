#include "oracles.hpp"

#include <doctest.h>

using namespace sparsebfs;

namespace {
Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<int>(xs.size()));
  int i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}
}  // namespace

TEST_CASE("truncate_top keeps the largest magnitudes") {
  CHECK(truncate_top(3, vec({1, -2})) == vec({1, -2}));
  CHECK(truncate_top(1, vec({3, -5, 1})) == vec({0, -5, 0}));
  CHECK(truncate_top(2, vec({2, -2, 1})) == vec({2, -2, 0}));
  CHECK(truncate_top(0, vec({2, 1})) == vec({0, 0}));
}

TEST_CASE("truncate_top breaks ties toward smaller indices") {
  CHECK(truncate_top(1, vec({1, -1, 1})) == vec({1, 0, 0}));
  CHECK(truncate_top(2, vec({0.5, 2, -2, 2})) == vec({0, 2, -2, 0}));
  CHECK(top_indices(2, vec({3, 3, 3, 3})) == Support{0, 1});
}

TEST_CASE("top_norm") {
  CHECK(top_norm(2, vec({3, 4})) == doctest::Approx(5.0));
  CHECK(top_norm(1, vec({3, 4})) == doctest::Approx(4.0));
  CHECK(top_norm(0, vec({3, 4})) == 0.0);
}

TEST_CASE("truncation properties on random vectors") {
  std::mt19937_64 g(11);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = oracle::uniform_int(g, 1, 10);
    const Vector z = oracle::gaussian(g, n);
    double prev = 0;
    for (int j = 0; j <= n; ++j) {
      const Vector t = truncate_top(j, z);
      CHECK(t.norm() == doctest::Approx(top_norm(j, z)).epsilon(1e-14));
      CHECK(truncate_top(j, t) == t);
      CHECK(top_norm(j, z) >= prev);
      prev = top_norm(j, z);
      // best j-sparse approximation, by enumerating every support of size j
      const double err = (z - t).norm();
      oracle::for_each_subset(n, j, [&](const Support& S) {
        Vector y = Vector::Zero(n);
        for (int i : S) y[i] = z[i];
        CHECK(err <= (z - y).norm() + 1e-15);
      });
    }
    CHECK(top_norm(n, z) == doctest::Approx(z.norm()));
  }
}

TEST_CASE("spectral_norm") {
  CHECK(spectral_norm(Matrix::Identity(2, 2)) == doctest::Approx(1.0));
  Matrix D = Matrix::Zero(2, 2);
  D(0, 0) = 3;
  D(1, 1) = 1;
  CHECK(spectral_norm(D) == doctest::Approx(3.0));
  CHECK(spectral_norm(Matrix::Zero(3, 4)) == 0.0);

  std::mt19937_64 g(5);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix A = oracle::gaussian(g, 10, 6);
    const double s = spectral_norm(A);
    CHECK(std::abs(s - oracle::svd_norm(A)) <= 1e-8 * oracle::svd_norm(A));
    for (int r = 0; r < 10; ++r) {
      const Vector v = oracle::unit(g, 6);
      CHECK(s >= (A * v).norm() - 1e-10 * s);
    }
  }
}

TEST_CASE("spectral_norm when the start vector is in the null space") {
  Matrix A(2, 2);
  A << 1, -1, 1, -1;
  CHECK(spectral_norm(A) == doctest::Approx(2.0));
}

TEST_CASE("support helpers") {
  CHECK(support_of(vec({0, 1e-3, 0, -2})) == Support{1, 3});
  Matrix A(2, 3);
  A << 1, 2, 3, 4, 5, 6;
  CHECK(gather_columns(A, {2, 0}) == (Matrix(2, 2) << 3, 1, 6, 4).finished());
  CHECK(gather(vec({7, 8, 9}), {1, 2}) == vec({8, 9}));
}
