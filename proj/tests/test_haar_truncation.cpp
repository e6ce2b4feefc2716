#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "rigidity/eigensolver.hpp"
#include "rigidity/ensemble.hpp"
#include "rigidity/experiments.hpp"

using namespace rigidity;

TEST_CASE("params validation") {
  CHECK_THROWS_AS(EnsembleParams(4, 4), std::invalid_argument);
  CHECK_THROWS_AS(EnsembleParams(4, 0), std::invalid_argument);
  CHECK_THROWS_AS(EnsembleParams(3, 5), std::invalid_argument);
  const EnsembleParams p(100, 50, true);
  CHECK(p.alpha() == doctest::Approx(0.5));
  CHECK(p.scale() == doctest::Approx(std::sqrt(2.0)));
  CHECK(p.with_rescaled(false).scale() == 1.0);
  CHECK_NOTHROW(p.require_alpha_window(0.1));
  CHECK_THROWS(EnsembleParams(100, 5).require_alpha_window(0.1));
}

TEST_CASE("ginibre entry moments") {
  const EnsembleParams p(4, 2);
  RandomStream stream(11);
  const int T = 100000;
  ComplexMatrix sum = ComplexMatrix::Zero(4, 4);
  Eigen::MatrixXd sq = Eigen::MatrixXd::Zero(4, 4);
  for (int t = 0; t < T; ++t) {
    const ComplexMatrix g = sample_ginibre(p, stream);
    sum += g;
    sq += g.cwiseAbs2();
  }
  // Re and Im each have sd sqrt(1/2); |g|^2 is Exp(1) with sd 1.
  const double mean_tol = 4.0 * std::sqrt(0.5) / std::sqrt(T);
  const double sq_tol = 4.0 / std::sqrt(T);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      CHECK(std::abs(sum(i, j).real() / T) <= mean_tol);
      CHECK(std::abs(sum(i, j).imag() / T) <= mean_tol);
      CHECK(std::abs(sq(i, j) / T - 1.0) <= sq_tol);
    }
}

TEST_CASE("sampling is deterministic per (seed, index)") {
  const EnsembleParams p(6, 3);
  RandomStream a(5, 9), b(5, 9), c(5, 10);
  const ComplexMatrix ga = sample_ginibre(p, a), gb = sample_ginibre(p, b), gc = sample_ginibre(p, c);
  CHECK(ga == gb);
  CHECK(ga != gc);
  RandomStream root(5);
  RandomStream sub = root.substream(9);
  CHECK(sample_ginibre(p, sub) == ga);
}

TEST_CASE("1x1 Haar unitary is a phase") {
  for (std::uint64_t s = 0; s < 20; ++s) {
    RandomStream stream(s);
    const ComplexMatrix u = haar_unitary(1, stream);
    CHECK(std::abs(std::abs(u(0, 0)) - 1.0) <= 1e-12);
  }
}

TEST_CASE("Haar unitarity") {
  for (int n : {2, 5, 16, 64, 128}) {
    RandomStream stream(n);
    for (int t = 0; t < 5; ++t) CHECK(unitarity_defect(haar_unitary(n, stream)) <= 1e-10);
  }
}

TEST_CASE("Haar trace second moment E|Tr U|^2 = 1") {
  const EnsembleParams p(8, 4);
  const int T = 20000;
  RandomStream stream(2024);
  double s = 0.0, s2 = 0.0;
  for (int t = 0; t < T; ++t) {
    const double v = std::norm(haar_unitary(p, stream).trace());
    s += v;
    s2 += v * v;
  }
  const double mean = s / T;
  const double se = std::sqrt((s2 / T - mean * mean) / T);
  CHECK(std::abs(mean - 1.0) <= 0.05 + 4 * se);
}

TEST_CASE("truncate") {
  SUBCASE("n=2, m=1 block and rescaling") {
    ComplexMatrix u(2, 2);
    u << Complex(0.6, 0.0), Complex(0.0, 0.8), Complex(0.0, 0.8), Complex(0.6, 0.0);
    const ComplexMatrix raw = truncate(u, EnsembleParams(2, 1));
    REQUIRE(raw.rows() == 1);
    CHECK(raw(0, 0) == u(0, 0));
    const ComplexMatrix resc = truncate(u, EnsembleParams(2, 1, true));
    CHECK(resc(0, 0) == u(0, 0) * std::sqrt(2.0));
  }
  SUBCASE("identity input") {
    const ComplexMatrix id = ComplexMatrix::Identity(3, 3);
    CHECK(truncate(id, EnsembleParams(3, 2)) == ComplexMatrix::Identity(2, 2));
  }
  SUBCASE("rescaling is exactly sqrt(n/m)") {
    RandomStream stream(3);
    const ComplexMatrix u = haar_unitary(EnsembleParams(12, 5), stream);
    const ComplexMatrix a = truncate(u, EnsembleParams(12, 5));
    const ComplexMatrix b = truncate(u, EnsembleParams(12, 5, true));
    CHECK(b == a * std::sqrt(12.0 / 5.0));
  }
  SUBCASE("dimension mismatch") {
    CHECK_THROWS_AS(truncate(ComplexMatrix::Identity(3, 3), EnsembleParams(4, 2)), std::invalid_argument);
  }
}

TEST_CASE("sample_truncation equals truncate(haar_unitary) bit for bit") {
  for (bool rescaled : {false, true}) {
    const EnsembleParams p(9, 4, rescaled);
    RandomStream a(77, 3), b(77, 3);
    CHECK(sample_truncation(p, a) == truncate(haar_unitary(p, b), p));
  }
}

TEST_CASE("truncation eigenvalues lie in the closed unit disc") {
  const EnsembleParams p(40, 20);
  for (int t = 0; t < 50; ++t) {
    RandomStream stream(1, t);
    for (const auto& z : general_eigenvalues(sample_truncation(p, stream)).values) CHECK(std::abs(z) <= 1 + 1e-8);
  }
}

TEST_CASE("radial CDF of eigenvalue moduli matches f_alpha within KS 0.02") {
  const EnsembleParams p(64, 32);
  const SpectrumBatch batch = sample_spectra(p, 10000, 99);
  std::vector<double> r;
  for (const auto& s : batch.samples)
    for (const auto& pt : s.points) r.push_back(pt.modulus);
  std::sort(r.begin(), r.end());
  const double a = p.alpha();
  auto cdf = [&](double x) { return x * x >= a ? 1.0 : (1 - a) / a * x * x / (1 - x * x); };
  double ks = 0.0;
  const double N = static_cast<double>(r.size());
  for (std::size_t k = 0; k < r.size(); ++k) {
    const double f = cdf(r[k]);
    ks = std::max({ks, std::abs(f - k / N), std::abs(f - (k + 1) / N)});
  }
  MESSAGE("KS distance to the limiting law " << ks);
  CHECK(ks <= 0.02);

  // Same moduli against the exact finite-n radial law: E N(|z| < r) / m with
  // E N a sum of binomial tails.
  auto exact = [&](double x) {
    double s = 0.0;
    for (int j = 0; j < p.m(); ++j) s += oracle::binom_sf(p.n() - p.m() + j, j, x * x);
    return s / p.m();
  };
  double ks_exact = 0.0;
  for (std::size_t k = 0; k < r.size(); k += 7) {
    const double f = exact(r[k]);
    ks_exact = std::max({ks_exact, std::abs(f - k / N), std::abs(f - (k + 1) / N)});
  }
  MESSAGE("KS distance to the finite-n law " << ks_exact);
  CHECK(ks_exact <= 0.02);
}
