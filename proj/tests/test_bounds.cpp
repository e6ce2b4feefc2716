#include <cmath>

#include "doctest.h"
#include "rigidity/bounds.hpp"
#include "rigidity/dpp_analytics.hpp"
#include "rigidity/experiments.hpp"

using namespace rigidity;

TEST_CASE("explicit macroscopic constants") {
  const auto c = TheoremConstants::for_alpha(0.5);
  CHECK(c.C_alpha_T11 == doctest::Approx(1.0 / (128 * M_PI * std::pow(1 + std::sqrt(3 + std::log(2.0)), 2))));
  CHECK(c.C_alpha_T11 == doctest::Approx(2.913e-4).epsilon(1e-3));
  CHECK(c.Cprime_alpha_T11 == doctest::Approx(8.0794).epsilon(1e-4));
}

TEST_CASE("bernstein bound shape") {
  const EnsembleParams p(64, 32);
  TheoremConstants c = TheoremConstants::for_alpha(0.5);
  c.C_alpha_bernstein = 0.7;
  double prev = 1e300;
  for (double t = 0.5; t < 200; t *= 1.3) {
    const double b = bound_bernstein(c, 3, M_PI, t, p);
    CHECK(b <= prev);
    prev = b;
  }
  CHECK(prev < 1e-15);
  // Crossover t = C i sqrt(log i) / 4: both branches give exp(-t/4).
  const double tc = c.C_alpha_bernstein * 3 * std::sqrt(std::log(3.0)) / 4;
  CHECK(bound_bernstein(c, 3, M_PI, tc, p) == doctest::Approx(2 * std::exp(2.0) * std::exp(-tc / 4)));
  CHECK(bound_bernstein(c, 1, M_PI, 8.0, p) == doctest::Approx(2 * std::exp(2.0) * std::exp(-2.0)));
  CHECK_THROWS_AS(bound_bernstein(c, 4, M_PI, 2.0, p), std::domain_error);
  CHECK_NOTHROW(bound_bernstein(c, 4, M_PI, 2.0, p, RangePolicy::informational));
  CHECK_NOTHROW(bound_bernstein(c, 5, M_PI, 1000.0, p));
}

TEST_CASE("fitted bernstein constant dominates exact tails") {
  const EnsembleParams p(64, 32);
  const KernelContext ctx(p);
  const auto region = CountingRegion::sector(3, M_PI);
  std::vector<double> grid;
  for (int t = 1; t <= 15; ++t) grid.push_back(t);
  TheoremConstants c = TheoremConstants::for_alpha(0.5);
  c.C_alpha_bernstein = calibrate_bernstein(ctx, {region}, grid);
  const auto dist = count_distribution(ctx, region);
  for (double t : grid) {
    const double b = bound_bernstein(c, 3, M_PI, t, p);
    CHECK(b >= dist.two_sided_tail(dist.mean, t));
    CHECK(b >= dist.two_sided_tail(12.5, t));
  }
}

TEST_CASE("individual bound branches") {
  const EnsembleParams p(64, 32);
  TheoremConstants c = TheoremConstants::for_alpha(0.5);
  c.C_alpha_individual = 2.0;
  c.c_alpha_individual = 0.05;
  const int pp = 10;  // l = 4, past the admissible range at m = 32
  const auto I = RangePolicy::informational;
  const double cutoff = rigidity_support_cutoff(pp, p);
  CHECK(cutoff == doctest::Approx(2 * std::sqrt(32.0 + 9.0)));
  const auto past = bound_individual(c, pp, cutoff + 1e-9, p, I);
  CHECK(past.value == 0.0);
  CHECK(past.small_s == 0.0);
  CHECK(past.large_s == 0.0);
  CHECK(past.beyond_support);
  const double sb = 2 * M_PI * 3;
  const auto at = bound_individual(c, pp, sb, p, I);
  CHECK(at.small_s == doctest::Approx(2 * std::exp(-sb * sb / (2.0 * 4 * std::sqrt(std::log(4.0))))));
  CHECK(at.large_s == doctest::Approx(2 * std::exp(-0.05 * sb * sb)));
  CHECK(at.value == at.small_s);
  CHECK(bound_individual(c, pp, sb + 0.1, p, I).value == bound_individual(c, pp, sb + 0.1, p, I).large_s);
  CHECK_FALSE(eigenvalue_index_admissible(1, p));
  CHECK(eigenvalue_index_admissible(5, p));
  CHECK_FALSE(eigenvalue_index_admissible(10, p));
  CHECK_THROWS_AS(bound_individual(c, 10, 1.0, p), std::domain_error);
  CHECK(bound_individual(c, 5, 1.0, p).value == doctest::Approx(2 * std::exp(-1.0 / (2.0 * 3 * std::sqrt(std::log(3.0))))));
  CHECK_THROWS_AS(bound_individual(c, 1, 1.0, p), std::domain_error);
  CHECK_NOTHROW(bound_individual(c, 1, 1.0, p, RangePolicy::informational));
}

TEST_CASE("dbl bound") {
  const EnsembleParams p(64, 32, true);
  const auto f = bound_dbl(p);
  double prev = f(0.0);
  for (double r = 0.01; r <= 2.0; r += 0.01) {
    CHECK(f(r) <= prev);
    prev = f(r);
  }
  CHECK(std::isfinite(bound_dbl(EnsembleParams(20, 10, true))(0.5)));
}

TEST_CASE("variance bound") {
  TheoremConstants c = TheoremConstants::for_alpha(0.5);
  c.C_alpha_variance = 3.0;
  const double a = bound_variance(c, 5, EnsembleParams(64, 32));
  const double b = bound_variance(c, 5, EnsembleParams(128, 64));
  CHECK(b == doctest::Approx(a / 2));
  CHECK(a == doctest::Approx(3.0 * std::sqrt(5 * std::log(6.0)) / 64));
  CHECK_THROWS_AS(bound_variance(c, 10, EnsembleParams(64, 32)), std::domain_error);
  CHECK_NOTHROW(bound_variance(c, 10, EnsembleParams(64, 32), RangePolicy::informational));
  CHECK_THROWS_AS(bound_variance(c, 1, EnsembleParams(64, 32)), std::invalid_argument);
}

TEST_CASE("index admissibility") {
  const EnsembleParams p(64, 32);
  const double v = valid_index_bound(p);
  CHECK(counting_index_admissible(1, p));
  CHECK(counting_index_admissible(static_cast<int>(v), p));
  CHECK_FALSE(counting_index_admissible(static_cast<int>(v) + 1, p));
  CHECK_FALSE(counting_index_admissible(0, p));
}
