#pragma once

#include <functional>

#include "rigidity/ensemble.hpp"

namespace rigidity {

/// Constants entering the tail and variance bounds.
///
/// The two macroscopic constants are explicit functions of alpha. The others
/// are only known to exist; here they are calibrated fit parameters (see
/// calibrate_constants) and must never be read as the true constants.
struct TheoremConstants {
  double C_alpha_T11 = 0.0;
  double Cprime_alpha_T11 = 0.0;
  double C_alpha_bernstein = 1.0;
  /// Small-s constant of the individual-eigenvalue bound.
  double C_alpha_individual = 1.0;
  /// Large-s rate of the individual-eigenvalue bound.
  double c_alpha_individual = 0.0;
  double C_alpha_variance = 1.0;

  /// Explicit constants for alpha, fit parameters at their defaults.
  static TheoremConstants for_alpha(double alpha);
};

/// Whether a bound may be evaluated outside the index range its statement covers.
enum class RangePolicy { strict, informational };

/// 2 e^2 exp(-min{t^2 / (C i sqrt(log i)), t / 4}).
///
/// Strict evaluation needs 1 <= i <= valid_index_bound, or i <= sqrt(m) with
/// t > 12 sqrt(2 m log(m + 1)) / (1 - alpha); otherwise std::domain_error.
/// For i = 1 the first branch is infinite and the bound reduces to the t / 4 branch.
double bound_bernstein(const TheoremConstants& consts, int i, double theta, double t, const EnsembleParams& params,
                       RangePolicy policy = RangePolicy::strict);

/// Both branches of the individual-eigenvalue bound at one (p, s).
struct IndividualBound {
  double small_s = 0.0;   // 2 exp(-s^2 / (C l sqrt(log l)))
  double large_s = 0.0;   // 2 exp(-c s^2)
  double value = 0.0;     // the branch selected by s
  bool beyond_support = false;
};

/// Branches: s <= 2 pi (l - 1) small-s, up to 2 sqrt(n - m + (l-1)^2) large-s,
/// and exactly 0 (both columns) past that cutoff. l = ceil(sqrt(p)).
IndividualBound bound_individual(const TheoremConstants& consts, int p, double s, const EnsembleParams& params,
                                 RangePolicy policy = RangePolicy::strict);

/// 2 sqrt(n - m + (l - 1)^2): scaled deviations can never exceed this.
double rigidity_support_cutoff(int p, const EnsembleParams& params);

/// r -> e^2 exp(-C m^2 r^2 + 2 m log m + C' m) + (e / 2 pi) sqrt(m / (1 - alpha)) e^{-m}
std::function<double(double)> bound_dbl(const EnsembleParams& params);

/// C sqrt(p log(p + 1)) / n
double bound_variance(const TheoremConstants& consts, int p, const EnsembleParams& params,
                      RangePolicy policy = RangePolicy::strict);

/// True when 2 <= ceil(sqrt(p)) <= valid_index_bound.
bool eigenvalue_index_admissible(int p, const EnsembleParams& params);

/// True when 1 <= i <= valid_index_bound.
bool counting_index_admissible(int i, const EnsembleParams& params);

}  // namespace rigidity
