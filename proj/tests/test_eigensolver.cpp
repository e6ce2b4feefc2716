#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "rigidity/eigensolver.hpp"
#include "rigidity/ensemble.hpp"
#include "rigidity/matching.hpp"

using namespace rigidity;

namespace {

// Optimal-matching distance between two eigenvalue multisets.
double multiset_distance(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  return oracle::bottleneck_distance(a, b);
}

ComplexMatrix random_matrix(int n, std::uint64_t seed) {
  RandomStream s(seed);
  ComplexMatrix a(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) a(i, j) = s.complex_gaussian();
  return a;
}

}  // namespace

TEST_CASE("diagonal and nilpotent") {
  ComplexMatrix d = ComplexMatrix::Zero(2, 2);
  d(0, 0) = 0.5;
  d(1, 1) = Complex(0.0, 0.3);
  const auto e = general_eigenvalues(d);
  CHECK(multiset_distance(e.values, {Complex(0.5, 0), Complex(0, 0.3)}) <= 1e-14);

  ComplexMatrix nil = ComplexMatrix::Zero(2, 2);
  nil(0, 1) = 1.0;
  const auto z = general_eigenvalues(nil);
  REQUIRE(z.values.size() == 2);
  CHECK(std::abs(z.values[0]) <= 1e-14);
  CHECK(std::abs(z.values[1]) <= 1e-14);
}

TEST_CASE("residuals from Schur data on truncation draws") {
  for (int dim : {16, 32}) {
    const EnsembleParams p(2 * dim, dim);
    for (int t = 0; t < 10; ++t) {
      RandomStream s(dim, t);
      const ComplexMatrix a = sample_truncation(p, s);
      const auto schur = detail::complex_schur(a);
      const ComplexMatrix v = detail::schur_eigenvectors(schur);
      const double norm = a.norm();
      CHECK((schur.z * schur.t * schur.z.adjoint() - a).norm() <= 1e-12 * norm);
      CHECK((schur.z.adjoint() * schur.z - ComplexMatrix::Identity(dim, dim)).cwiseAbs().maxCoeff() <= 1e-12);
      for (int k = 0; k < dim; ++k) {
        const Complex lambda = schur.t(k, k);
        CHECK((a * v.col(k) - lambda * v.col(k)).norm() <= 1e-8 * norm);
        for (int i = k + 1; i < dim; ++i) CHECK(schur.t(i, k) == Complex(0.0, 0.0));
      }
      const auto e = general_eigenvalues(a);
      CHECK(e.residual_bound <= 1e-10);
    }
  }
}

TEST_CASE("agrees with Eigen's solver and a characteristic-polynomial oracle") {
  for (int t = 0; t < 5; ++t) {
    const ComplexMatrix a = random_matrix(20, 100 + t);
    CHECK(multiset_distance(general_eigenvalues(a).values, oracle::eigen_reference(a)) <= 1e-9);
  }
  for (int t = 0; t < 5; ++t) {
    const ComplexMatrix a = random_matrix(4, 200 + t);
    CHECK(multiset_distance(general_eigenvalues(a).values, oracle::charpoly_roots(a)) <= 1e-9);
  }
}

TEST_CASE("trace, determinant and similarity invariance") {
  for (int t = 0; t < 5; ++t) {
    const int dim = 12;
    const ComplexMatrix a = random_matrix(dim, 300 + t);
    const auto e = general_eigenvalues(a);
    Complex sum = 0.0, prod = 1.0;
    for (const auto& z : e.values) {
      sum += z;
      prod *= z;
    }
    CHECK(std::abs(sum - a.trace()) <= 1e-8 * dim * a.norm());
    const Complex det = a.determinant();
    CHECK(std::abs(prod - det) <= 1e-6 * std::abs(det));

    RandomStream s(400 + t);
    const ComplexMatrix q = haar_unitary(dim, s);
    const auto f = general_eigenvalues(q * a * q.adjoint());
    CHECK(multiset_distance(e.values, f.values) <= 1e-9 * a.norm());
  }
}

TEST_CASE("general solver input validation") {
  CHECK_THROWS_AS(general_eigenvalues(ComplexMatrix::Zero(2, 3)), std::invalid_argument);
  ComplexMatrix bad = ComplexMatrix::Identity(3, 3);
  bad(1, 2) = std::nan("");
  CHECK_THROWS_AS(general_eigenvalues(bad), std::invalid_argument);
  CHECK(general_eigenvalues(ComplexMatrix(0, 0)).values.empty());
}

TEST_CASE("hermitian eigenvalues") {
  SUBCASE("identity and diagonal") {
    const auto i3 = real_parts(hermitian_eigenvalues(ComplexMatrix::Identity(3, 3)));
    for (double v : i3) CHECK(v == doctest::Approx(1.0).epsilon(1e-15));
    ComplexMatrix d = ComplexMatrix::Zero(3, 3);
    d(0, 0) = 1.0;
    d(2, 2) = 0.5;
    const auto v = real_parts(hermitian_eigenvalues(d));
    CHECK(v[0] == 0.0);
    CHECK(v[1] == doctest::Approx(0.5));
    CHECK(v[2] == doctest::Approx(1.0));
  }
  SUBCASE("4x4 against the characteristic polynomial") {
    for (int t = 0; t < 5; ++t) {
      const ComplexMatrix a = random_matrix(4, 500 + t);
      const ComplexMatrix h = 0.5 * (a + a.adjoint());
      const auto e = hermitian_eigenvalues(h);
      CHECK(multiset_distance(e.values, oracle::charpoly_roots(h)) <= 1e-9);
      for (std::size_t k = 1; k < e.values.size(); ++k) CHECK(e.values[k - 1].real() <= e.values[k].real());
    }
  }
  SUBCASE("Gershgorin, trace, invariance") {
    const int dim = 10;
    const ComplexMatrix a = random_matrix(dim, 600);
    const ComplexMatrix h = 0.5 * (a + a.adjoint());
    const auto e = hermitian_eigenvalues(h);
    double lo = 1e300, hi = -1e300, tr = 0.0;
    for (int i = 0; i < dim; ++i) {
      double off = 0.0;
      for (int j = 0; j < dim; ++j)
        if (j != i) off += std::abs(h(i, j));
      lo = std::min(lo, h(i, i).real() - off);
      hi = std::max(hi, h(i, i).real() + off);
      tr += h(i, i).real();
    }
    double sum = 0.0;
    for (const auto& z : e.values) {
      CHECK(z.imag() == 0.0);
      CHECK(z.real() >= lo);
      CHECK(z.real() <= hi);
      sum += z.real();
    }
    CHECK(std::abs(sum - tr) <= 1e-8 * dim * h.norm());
    RandomStream s(601);
    const ComplexMatrix q = haar_unitary(dim, s);
    ComplexMatrix g = q * h * q.adjoint();
    g = 0.5 * (g + g.adjoint());
    CHECK(multiset_distance(e.values, hermitian_eigenvalues(g).values) <= 1e-9 * h.norm());
  }
  SUBCASE("rejects non-Hermitian input") {
    ComplexMatrix h = ComplexMatrix::Identity(3, 3);
    h(0, 1) = 1e-9;
    CHECK_THROWS_AS(hermitian_eigenvalues(h), std::invalid_argument);
  }
}
