#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rigidity/bounds.hpp"
#include "rigidity/dpp_analytics.hpp"
#include "rigidity/ensemble.hpp"
#include "rigidity/spectral_geometry.hpp"

namespace rigidity {

/// Monte Carlo run description. Grids and targets are only read by the
/// experiments that use them.
struct ExperimentConfig {
  EnsembleParams params{2, 1};
  int trials = 1;
  std::uint64_t seed = 0;
  std::vector<CountingRegion> regions;
  std::vector<int> p_targets;
  std::vector<double> t_grid;
  std::vector<double> s_grid;
  /// Truncation sizes for the d_BL scaling run (n = round(m / alpha)).
  std::vector<int> m_values;
  TheoremConstants constants = TheoremConstants::for_alpha(0.5);
  /// Order used to label eigenvalues lambda_1..lambda_m.
  SpiralConvention order = SpiralConvention::annular;
  /// 0 = RIGIDITY_LAB_THREADS / hardware concurrency.
  int threads = 0;
};

/// Successful trials in trial-index order plus the failure count.
struct SpectrumBatch {
  EnsembleParams params{2, 1};
  std::uint64_t seed = 0;
  int requested = 0;
  int failures = 0;
  std::vector<SpectrumSample> samples;

  int trials() const { return static_cast<int>(samples.size()); }
};

/// Fraction of failed trials tolerated before a run is aborted.
inline constexpr double kFailureBudget = 0.01;

/// Eigenvalues of `trials` independent truncations; trial k uses substream k of
/// `seed`. Eigensolver failures are dropped and counted; more than 1% aborts
/// with NumericalError.
SpectrumBatch sample_spectra(const EnsembleParams& params, int trials, std::uint64_t seed, int threads = 0);

/// Empirical frequency with its binomial standard error sqrt(p(1-p)/T).
struct Frequency {
  double value = 0.0;
  double std_error = 0.0;

  /// value + z * std_error, with the rule-of-three 3/T when nothing was observed.
  double upper_limit(int trials, double z = 3.0) const;
};

Frequency empirical_frequency(int hits, int trials);

struct CountingTail {
  double t = 0.0;
  Frequency empirical;                 // P[|N - center| >= t]
  double exact = 0.0;                  // same, Poisson-binomial
  Frequency empirical_about_mean;      // P[|N - E N| >= t]
  double exact_about_mean = 0.0;
  double bound = 0.0;                  // NaN for non-sector regions
};

struct CountingRow {
  CountingRegion region = CountingRegion::disc(1);
  bool admissible = false;
  double center = 0.0;  // m mu_alpha(region) formula value
  double empirical_mean = 0.0;
  double empirical_variance = 0.0;
  double exact_mean = 0.0;
  double exact_variance_spectral = 0.0;
  double exact_variance_decomposed = 0.0;  // NaN unless sector region
  std::vector<CountingTail> tails;
};

struct CountingReport {
  EnsembleParams params{2, 1};
  int trials = 0;
  int failures = 0;
  std::vector<CountingRow> rows;
};

CountingReport run_counting_experiment(const ExperimentConfig& cfg, const SpectrumBatch& batch);
CountingReport run_counting_experiment(const ExperimentConfig& cfg);

struct RigidityPoint {
  double s = 0.0;
  Frequency empirical;  // P[scaled deviation >= s]
  IndividualBound bound;
};

struct RigidityRow {
  int p = 0;
  bool admissible = false;
  double support_cutoff = 0.0;
  double median_deviation = 0.0;
  double max_deviation = 0.0;
  std::vector<RigidityPoint> points;
};

struct RigidityReport {
  EnsembleParams params{2, 1};
  int trials = 0;
  int failures = 0;
  std::vector<RigidityRow> rows;
};

/// sqrt(n - m + (l-1)^2) |lambda_p - lambda~_p| for one sorted raw sample.
double scaled_deviation(const SpectrumSample& sorted, int p, const EnsembleParams& params);

RigidityReport run_rigidity_experiment(const ExperimentConfig& cfg, const SpectrumBatch& batch);
RigidityReport run_rigidity_experiment(const ExperimentConfig& cfg);

struct VarianceRow {
  int p = 0;
  bool admissible = false;
  double empirical_variance = 0.0;  // E|lambda_p - E lambda_p|^2, unbiased
  double jackknife_se = 0.0;
  double scaling = 0.0;             // sqrt(p log(p + 1)) / n
  double ratio() const { return empirical_variance / scaling; }
  double ratio_se() const { return jackknife_se / scaling; }
};

struct VarianceReport {
  EnsembleParams params{2, 1};
  int trials = 0;
  int failures = 0;
  std::vector<VarianceRow> rows;
};

/// Unbiased variance of complex values and its delete-one jackknife error.
struct JackknifeVariance {
  double variance = 0.0;
  double std_error = 0.0;
};
JackknifeVariance jackknife_complex_variance(const std::vector<Complex>& values);

VarianceReport run_variance_experiment(const ExperimentConfig& cfg, const SpectrumBatch& batch);
VarianceReport run_variance_experiment(const ExperimentConfig& cfg);

struct DblRow {
  int n = 0;
  int m = 0;
  int trials = 0;
  double median_proxy = 0.0;
  double q90_proxy = 0.0;
  double bound_at_median = 0.0;
  std::vector<double> proxies;
};

struct DblReport {
  std::vector<DblRow> rows;
};

/// Upper proxy for d_BL(mu_m, mu_alpha): W1 between the empirical measure of a
/// rescaled sample and the uniform measure on the rescaled predicted lattice.
double dbl_proxy(const SpectrumSample& rescaled_sample, const EnsembleParams& params);

/// One row per batch; every batch must be in rescaled coordinates.
DblReport run_dbl_experiment(const std::vector<SpectrumBatch>& batches);
/// Samples cfg.trials rescaled truncations for every m in cfg.m_values at alpha = cfg.params.alpha().
DblReport run_dbl_experiment(const ExperimentConfig& cfg);

/// Linear-interpolation quantile (type 7) of unsorted data.
double quantile(std::vector<double> data, double level);

/// Fitted constants with the regime information the fit saw.
struct Calibration {
  TheoremConstants constants;
  bool bernstein_constrained = false;
  bool individual_small_constrained = false;
  bool individual_large_constrained = false;
  bool variance_constrained = false;
};

/// Relative resolution of every calibration grid.
inline constexpr double kCalibrationStep = 1.01;
inline constexpr double kCalibrationFloor = 1e-3;

/// Smallest grid constant C with 2e^2 exp(-t^2 / (C i sqrt(log i))) above the
/// exact two-sided tails (about both the nominal center and the exact mean) of
/// every sector region and t > 0 in the grid. Dominating through the quadratic
/// branch alone implies domination of the full bound. Throws NumericalError
/// when some tail exceeds 2 e^2 exp(-t/4), which no constant can fix.
double calibrate_bernstein(const KernelContext& ctx, const std::vector<CountingRegion>& regions,
                           const std::vector<double>& t_grid, bool* constrained = nullptr);

/// Fits every non-explicit constant: Bernstein from exact tails; the
/// individual-eigenvalue constants and the variance constant from Monte Carlo
/// upper confidence limits (3 standard errors). Deterministic for fixed seed.
Calibration calibrate_constants(const ExperimentConfig& cfg, const SpectrumBatch& batch);
Calibration calibrate_constants(const ExperimentConfig& cfg);

/// s at which the fitted small-s individual bound equals `level`.
double individual_bound_quantile(const TheoremConstants& consts, int p, double level);

}  // namespace rigidity
