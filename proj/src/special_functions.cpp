#include "rigidity/special_functions.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace rigidity {

double log_factorial(int k) {
  if (k < 0) throw std::invalid_argument("log_factorial: negative argument");
  return std::lgamma(static_cast<double>(k) + 1.0);
}

double log_binomial(int n, int k) {
  if (k < 0 || k > n) return -std::numeric_limits<double>::infinity();
  return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

double log_beta(double a, double b) { return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b); }

namespace {

// Continued fraction for I_x(a, b) (modified Lentz); NaN if it stalls.
double beta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxIter = 20000;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) return h;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

struct BetaTails {
  double lower;  // I_x(a, b)
  double upper;  // 1 - I_x(a, b)
};

BetaTails beta_tails(double a, double b, double x, double y) {
  if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("incomplete_beta: a and b must be positive");
  if (!(x >= 0.0) || !(y >= 0.0) || std::abs(x + y - 1.0) > 1e-12) {
    throw std::invalid_argument("incomplete_beta: need x, y >= 0 with x + y = 1");
  }
  if (x == 0.0) return {0.0, 1.0};
  if (y == 0.0) return {1.0, 0.0};
  const double front = std::exp(a * std::log(x) + b * std::log(y) - log_beta(a, b));
  if (x < (a + 1.0) / (a + b + 2.0)) {
    const double lower = front * beta_continued_fraction(a, b, x) / a;
    return {lower, 1.0 - lower};
  }
  const double upper = front * beta_continued_fraction(b, a, y) / b;
  return {1.0 - upper, upper};
}

struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussRule make_gauss_legendre(int order) {
  GaussRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  for (int i = 0; i < order; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= order; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= order; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = order * (x * p1 - p0) / (x * x - 1.0);
    rule.nodes[i] = x;
    rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

const GaussRule& rule10() {
  static const GaussRule r = make_gauss_legendre(10);
  return r;
}
const GaussRule& rule20() {
  static const GaussRule r = make_gauss_legendre(20);
  return r;
}

double apply_rule(const GaussRule& rule, const std::function<double(double)>& f, double a, double b) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double s = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) s += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return s * half;
}

double adaptive_panel(const std::function<double(double)>& f, double a, double b, double rel_tol, double abs_tol,
                      int depth) {
  const double coarse = apply_rule(rule10(), f, a, b);
  const double fine = apply_rule(rule20(), f, a, b);
  if (depth <= 0 || std::abs(fine - coarse) <= std::max(abs_tol, rel_tol * std::abs(fine))) return fine;
  const double mid = 0.5 * (a + b);
  return adaptive_panel(f, a, mid, rel_tol, 0.5 * abs_tol, depth - 1) +
         adaptive_panel(f, mid, b, rel_tol, 0.5 * abs_tol, depth - 1);
}

}  // namespace

double incomplete_beta(double a, double b, double x, double y) { return beta_tails(a, b, x, y).lower; }

double incomplete_beta_complement(double a, double b, double x, double y) { return beta_tails(a, b, x, y).upper; }

double incomplete_beta_interval(double a, double b, double x_lo, double y_lo, double x_hi, double y_hi) {
  if (x_hi < x_lo) throw std::invalid_argument("incomplete_beta_interval: x_hi < x_lo");
  const BetaTails lo = beta_tails(a, b, x_lo, y_lo);
  const BetaTails hi = beta_tails(a, b, x_hi, y_hi);
  if (lo.lower <= 0.5) return hi.lower - lo.lower;
  return lo.upper - hi.upper;
}

double binomial_survival(int trials, int k, double p, double q) {
  if (k < 0) return 1.0;
  if (k >= trials) return 0.0;
  // P[X >= k + 1] = I_p(k + 1, trials - k)
  return incomplete_beta(k + 1.0, static_cast<double>(trials - k), p, q);
}

double binomial_cdf(int trials, int k, double p, double q) {
  if (k < 0) return 0.0;
  if (k >= trials) return 1.0;
  return incomplete_beta_complement(k + 1.0, static_cast<double>(trials - k), p, q);
}

double integrate_adaptive(const std::function<double(double)>& f, double a, double b, double rel_tol, double abs_tol,
                          int max_depth) {
  if (a == b) return 0.0;
  return adaptive_panel(f, a, b, rel_tol, abs_tol, max_depth);
}

}  // namespace rigidity
