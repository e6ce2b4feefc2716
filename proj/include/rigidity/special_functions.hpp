#pragma once

#include <functional>

namespace rigidity {

double log_factorial(int k);
double log_binomial(int n, int k);
double log_beta(double a, double b);

/// Regularized incomplete beta I_x(a, b) for a, b > 0.
///
/// `y` must equal 1 - x; passing it separately keeps full relative accuracy
/// when x is close to 1. Evaluated by Lentz's continued fraction on whichever
/// of I_x(a, b) and 1 - I_y(b, a) converges fast. Returns NaN when the
/// continued fraction fails to converge, so callers can fall back.
double incomplete_beta(double a, double b, double x, double y);

/// 1 - I_x(a, b), computed without cancellation.
double incomplete_beta_complement(double a, double b, double x, double y);

/// I_{x_hi}(a, b) - I_{x_lo}(a, b) for x_lo <= x_hi, choosing the lower or
/// upper tail representation so the difference does not cancel needlessly.
double incomplete_beta_interval(double a, double b, double x_lo, double y_lo, double x_hi, double y_hi);

/// P[X > k] for X ~ Binomial(trials, p), with q = 1 - p supplied exactly.
double binomial_survival(int trials, int k, double p, double q);
/// P[X <= k] for X ~ Binomial(trials, p).
double binomial_cdf(int trials, int k, double p, double q);

/// Adaptive Gauss-Legendre quadrature of f over [a, b].
///
/// Each panel is integrated with 10 and 20 nodes; panels whose estimates
/// differ by more than max(abs_tol, rel_tol * |estimate|) are bisected, down
/// to `max_depth` levels.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b, double rel_tol = 1e-12,
                          double abs_tol = 1e-300, int max_depth = 40);

}  // namespace rigidity
