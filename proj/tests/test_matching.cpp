#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "rigidity/matching.hpp"

using namespace rigidity;

TEST_CASE("assignment on a known matrix") {
  const std::vector<std::vector<double>> cost = {{4, 1, 3}, {2, 0, 5}, {3, 2, 2}};
  std::vector<int> assign;
  CHECK(min_cost_assignment(cost, &assign) == doctest::Approx(5.0));
  CHECK(assign == std::vector<int>{1, 0, 2});
  CHECK(min_cost_assignment({}) == 0.0);
  CHECK_THROWS(min_cost_assignment({{1, 2}, {3}}));
}

TEST_CASE("W1 against brute force") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int rep = 0; rep < 30; ++rep) {
    const int n = 1 + rep % 7;
    std::vector<Complex> a(n), b(n);
    for (auto& z : a) z = Complex(u(rng), u(rng));
    for (auto& z : b) z = Complex(u(rng), u(rng));
    CHECK(wasserstein1_uniform(a, b) == doctest::Approx(oracle::w1_bruteforce(a, b)).epsilon(1e-12));
  }
  const std::vector<Complex> same = {Complex(0.1, 0.2), Complex(-0.3, 0.0)};
  CHECK(wasserstein1_uniform(same, same) == 0.0);
  const std::vector<Complex> one = {Complex(0, 0)};
  CHECK_THROWS(wasserstein1_uniform(same, one));
}
