#include "rigidity/bounds.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "rigidity/spectral_geometry.hpp"

namespace rigidity {

namespace {

constexpr double kE = 2.718281828459045235360287471352;

double safe_bound(const EnsembleParams& params) {
  try {
    return valid_index_bound(params);
  } catch (const std::exception&) {
    return 0.0;
  }
}

}  // namespace

TheoremConstants TheoremConstants::for_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("TheoremConstants: alpha must lie in (0, 1)");
  TheoremConstants c;
  const double log_inv = std::log(1.0 / alpha);
  const double root = 1.0 + std::sqrt(3.0 + log_inv);
  c.C_alpha_T11 = 1.0 / (128.0 * M_PI * root * root);
  c.Cprime_alpha_T11 = 6.0 + 3.0 * log_inv;
  return c;
}

bool counting_index_admissible(int i, const EnsembleParams& params) {
  return i >= 1 && i <= safe_bound(params);
}

bool eigenvalue_index_admissible(int p, const EnsembleParams& params) {
  if (p < 1 || p > params.m()) return false;
  const int l = shell_index(p);
  return l >= 2 && l <= safe_bound(params);
}

double bound_bernstein(const TheoremConstants& consts, int i, double theta, double t, const EnsembleParams& params,
                       RangePolicy policy) {
  if (!(t >= 0.0)) throw std::invalid_argument("bound_bernstein: t must be >= 0");
  if (!(theta >= 0.0) || theta > kTwoPi) throw std::invalid_argument("bound_bernstein: theta outside [0, 2pi]");
  if (i < 1) throw std::invalid_argument("bound_bernstein: i must be >= 1");
  if (policy == RangePolicy::strict && !counting_index_admissible(i, params)) {
    const int m = params.m();
    const double extended_t = 12.0 / (1.0 - params.alpha()) * std::sqrt(2.0 * m * std::log(m + 1.0));
    if (!(i <= std::sqrt(static_cast<double>(m)) && t > extended_t)) {
      throw std::domain_error("bound_bernstein: i=" + std::to_string(i) + " outside the admissible range (bound " +
                              std::to_string(safe_bound(params)) + ") and t <= " + std::to_string(extended_t));
    }
  }
  const double spread = i * std::sqrt(std::log(static_cast<double>(i)));
  const double quadratic = spread > 0.0 ? t * t / (consts.C_alpha_bernstein * spread)
                                        : std::numeric_limits<double>::infinity();
  const double rate = std::min(quadratic, t / 4.0);
  return 2.0 * kE * kE * std::exp(-rate);
}

double rigidity_support_cutoff(int p, const EnsembleParams& params) {
  const int l = shell_index(p);
  return 2.0 * std::sqrt(params.n() - params.m() + (l - 1.0) * (l - 1.0));
}

IndividualBound bound_individual(const TheoremConstants& consts, int p, double s, const EnsembleParams& params,
                                 RangePolicy policy) {
  if (p < 1 || p > params.m()) throw std::invalid_argument("bound_individual: p outside [1, m]");
  if (!(s >= 0.0)) throw std::invalid_argument("bound_individual: s must be >= 0");
  if (policy == RangePolicy::strict && !eigenvalue_index_admissible(p, params)) {
    throw std::domain_error("bound_individual: p=" + std::to_string(p) + " outside the admissible range (need 2 <= "
                            "ceil(sqrt(p)) <= " + std::to_string(safe_bound(params)) + ")");
  }
  const int l = shell_index(p);
  IndividualBound b;
  if (s > rigidity_support_cutoff(p, params)) {
    b.beyond_support = true;
    return b;
  }
  const double spread = l * std::sqrt(std::log(static_cast<double>(l)));
  b.small_s = spread > 0.0 ? 2.0 * std::exp(-s * s / (consts.C_alpha_individual * spread)) : 2.0;
  b.large_s = 2.0 * std::exp(-consts.c_alpha_individual * s * s);
  b.value = s <= kTwoPi * (l - 1) ? b.small_s : b.large_s;
  return b;
}

std::function<double(double)> bound_dbl(const EnsembleParams& params) {
  const TheoremConstants c = TheoremConstants::for_alpha(params.alpha());
  const double m = params.m();
  const double alpha = params.alpha();
  const double floor_term = kE / (2.0 * M_PI) * std::sqrt(m / (1.0 - alpha)) * std::exp(-m);
  return [=](double r) {
    const double exponent = -c.C_alpha_T11 * m * m * r * r + 2.0 * m * std::log(m) + c.Cprime_alpha_T11 * m;
    return kE * kE * std::exp(exponent) + floor_term;
  };
}

double bound_variance(const TheoremConstants& consts, int p, const EnsembleParams& params, RangePolicy policy) {
  if (p < 1 || p > params.m()) throw std::invalid_argument("bound_variance: p outside [1, m]");
  if (shell_index(p) < 2) throw std::invalid_argument("bound_variance: p must satisfy ceil(sqrt(p)) >= 2");
  if (policy == RangePolicy::strict && !eigenvalue_index_admissible(p, params)) {
    throw std::domain_error("bound_variance: p=" + std::to_string(p) + " outside the admissible range");
  }
  return consts.C_alpha_variance * std::sqrt(p * std::log(p + 1.0)) / params.n();
}

}  // namespace rigidity
