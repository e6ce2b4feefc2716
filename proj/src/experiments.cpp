#include "rigidity/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>

#include "rigidity/eigensolver.hpp"
#include "rigidity/matching.hpp"
#include "rigidity/parallel.hpp"

namespace rigidity {

namespace {

constexpr double kE = 2.718281828459045235360287471352;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

int resolve_threads(int threads) { return threads > 0 ? threads : configured_threads(); }

void require_unrescaled(const SpectrumBatch& batch, const char* who) {
  if (batch.params.rescaled()) throw std::invalid_argument(std::string(who) + ": batch must be in raw coordinates");
}

// m mu_alpha(region) from the closed forms, without the support check.
double nominal_center(const EnsembleParams& params, const CountingRegion& region) {
  const double i = region.index();
  switch (region.kind()) {
    case CountingRegion::Kind::disc:
      return i * i;
    case CountingRegion::Kind::sector:
      return i * i + region.theta() / kTwoPi * (2.0 * i + 1.0);
    case CountingRegion::Kind::annulus:
      return 2.0 * i - 1.0;
    case CountingRegion::Kind::custom_disc:
      return params.m() * region_mass(params, region);
  }
  return kNaN;
}

bool region_admissible(const CountingRegion& region, const EnsembleParams& params) {
  if (region.kind() == CountingRegion::Kind::custom_disc) return region.outer_radius(params) <= std::sqrt(params.alpha());
  return counting_index_admissible(region.index(), params);
}

// Smallest grid value C_k = floor * step^k with C_k >= need.
double snap_up(double need) {
  if (!(need > kCalibrationFloor)) return kCalibrationFloor;
  int k = static_cast<int>(std::floor(std::log(need / kCalibrationFloor) / std::log(kCalibrationStep)));
  k = std::max(k - 1, 0);
  double c = kCalibrationFloor * std::pow(kCalibrationStep, k);
  while (c < need) c = kCalibrationFloor * std::pow(kCalibrationStep, ++k);
  return c;
}

// Largest grid value <= limit, or 0 below the floor.
double snap_down(double limit) {
  if (!(limit >= kCalibrationFloor)) return 0.0;
  int k = static_cast<int>(std::floor(std::log(limit / kCalibrationFloor) / std::log(kCalibrationStep))) + 1;
  double c = kCalibrationFloor * std::pow(kCalibrationStep, k);
  while (c > limit && k > 0) c = kCalibrationFloor * std::pow(kCalibrationStep, --k);
  return c <= limit ? c : 0.0;
}

std::vector<std::vector<Complex>> eigenvalue_columns(const SpectrumBatch& batch, const std::vector<int>& ps,
                                                     SpiralConvention order) {
  std::vector<std::vector<Complex>> cols(ps.size());
  for (auto& c : cols) c.reserve(batch.samples.size());
  for (const auto& sample : batch.samples) {
    const SpectrumSample sorted = spiral_sort(sample, batch.params, order);
    for (std::size_t k = 0; k < ps.size(); ++k) cols[k].push_back(sorted.points.at(ps[k] - 1).value);
  }
  return cols;
}

void check_targets(const std::vector<int>& ps, const EnsembleParams& params, const char* who) {
  for (int p : ps) {
    if (p < 1 || p > params.m()) {
      throw std::invalid_argument(std::string(who) + ": p=" + std::to_string(p) + " outside [1, " +
                                  std::to_string(params.m()) + "]");
    }
  }
}

}  // namespace

SpectrumBatch sample_spectra(const EnsembleParams& params, int trials, std::uint64_t seed, int threads) {
  if (trials < 1) throw std::invalid_argument("sample_spectra: trials must be >= 1");
  std::vector<std::optional<SpectrumSample>> slots(trials);
  const RandomStream root(seed);
  parallel_for(static_cast<std::size_t>(trials), resolve_threads(threads), [&](std::size_t k) {
    try {
      RandomStream stream = root.substream(k);
      const ComplexMatrix a = sample_truncation(params, stream);
      const EigenvalueSet eig = general_eigenvalues(a);
      slots[k] = SpectrumSample::from_values(eig.values, params.rescaled(), seed, k);
    } catch (const NumericalError&) {
      slots[k].reset();
    }
  });
  SpectrumBatch batch;
  batch.params = params;
  batch.seed = seed;
  batch.requested = trials;
  for (auto& s : slots) {
    if (s) {
      batch.samples.push_back(std::move(*s));
    } else {
      ++batch.failures;
    }
  }
  if (batch.failures > kFailureBudget * trials) {
    throw NumericalError("sample_spectra: " + std::to_string(batch.failures) + " of " + std::to_string(trials) +
                         " trials failed (budget 1%)");
  }
  return batch;
}

double Frequency::upper_limit(int trials, double z) const {
  if (value == 0.0) return std::min(1.0, 3.0 / trials);
  return std::min(1.0, value + z * std_error);
}

Frequency empirical_frequency(int hits, int trials) {
  if (trials < 1) throw std::invalid_argument("empirical_frequency: trials must be >= 1");
  Frequency f;
  f.value = static_cast<double>(hits) / trials;
  f.std_error = std::sqrt(f.value * (1.0 - f.value) / trials);
  return f;
}

double quantile(std::vector<double> data, double level) {
  if (data.empty()) return kNaN;
  if (!(level >= 0.0 && level <= 1.0)) throw std::invalid_argument("quantile: level outside [0, 1]");
  std::sort(data.begin(), data.end());
  const double h = level * (data.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, data.size() - 1);
  return data[lo] + (h - lo) * (data[hi] - data[lo]);
}

CountingReport run_counting_experiment(const ExperimentConfig& cfg, const SpectrumBatch& batch) {
  require_unrescaled(batch, "run_counting_experiment");
  const EnsembleParams& params = batch.params;
  const KernelContext ctx(params);
  const int trials = batch.trials();

  CountingReport report;
  report.params = params;
  report.trials = trials;
  report.failures = batch.failures;
  for (const auto& region : cfg.regions) {
    CountingRow row;
    row.region = region;
    row.admissible = region_admissible(region, params);
    row.center = nominal_center(params, region);

    const CountDistribution dist = count_distribution(ctx, region);
    row.exact_mean = expected_count_exact(ctx, region);
    row.exact_variance_spectral = variance_exact_spectral(ctx, region);
    row.exact_variance_decomposed =
        region.kind() == CountingRegion::Kind::sector ? variance_exact_decomposed(ctx, region) : kNaN;

    std::vector<int> counts;
    counts.reserve(trials);
    for (const auto& s : batch.samples) counts.push_back(count_in_region(s, region, params));
    double sum = 0.0;
    for (int c : counts) sum += c;
    row.empirical_mean = trials > 0 ? sum / trials : kNaN;
    double ss = 0.0;
    for (int c : counts) ss += (c - row.empirical_mean) * (c - row.empirical_mean);
    row.empirical_variance = trials > 1 ? ss / (trials - 1) : 0.0;

    for (double t : cfg.t_grid) {
      CountingTail tail;
      tail.t = t;
      int hits = 0, hits_mean = 0;
      for (int c : counts) {
        if (std::abs(c - row.center) >= t) ++hits;
        if (std::abs(c - row.exact_mean) >= t) ++hits_mean;
      }
      tail.empirical = empirical_frequency(hits, trials);
      tail.empirical_about_mean = empirical_frequency(hits_mean, trials);
      tail.exact = dist.two_sided_tail(row.center, t);
      tail.exact_about_mean = dist.two_sided_tail(row.exact_mean, t);
      tail.bound = region.kind() == CountingRegion::Kind::sector
                       ? bound_bernstein(cfg.constants, region.index(), region.theta(), t, params,
                                         RangePolicy::informational)
                       : kNaN;
      row.tails.push_back(tail);
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

CountingReport run_counting_experiment(const ExperimentConfig& cfg) {
  return run_counting_experiment(cfg, sample_spectra(cfg.params.with_rescaled(false), cfg.trials, cfg.seed, cfg.threads));
}

double scaled_deviation(const SpectrumSample& sorted, int p, const EnsembleParams& params) {
  if (sorted.rescaled) throw std::invalid_argument("scaled_deviation: sample must be in raw coordinates");
  const int l = shell_index(p);
  const double scale = std::sqrt(params.n() - params.m() + (l - 1.0) * (l - 1.0));
  return scale * std::abs(sorted.points.at(p - 1).value - predicted_location(p, params).value);
}

RigidityReport run_rigidity_experiment(const ExperimentConfig& cfg, const SpectrumBatch& batch) {
  require_unrescaled(batch, "run_rigidity_experiment");
  const EnsembleParams& params = batch.params;
  check_targets(cfg.p_targets, params, "run_rigidity_experiment");
  const int trials = batch.trials();

  std::vector<std::vector<double>> devs(cfg.p_targets.size());
  for (const auto& sample : batch.samples) {
    const SpectrumSample sorted = spiral_sort(sample, batch.params, cfg.order);
    for (std::size_t k = 0; k < cfg.p_targets.size(); ++k)
      devs[k].push_back(scaled_deviation(sorted, cfg.p_targets[k], params));
  }

  RigidityReport report;
  report.params = params;
  report.trials = trials;
  report.failures = batch.failures;
  for (std::size_t k = 0; k < cfg.p_targets.size(); ++k) {
    const int p = cfg.p_targets[k];
    RigidityRow row;
    row.p = p;
    row.admissible = eigenvalue_index_admissible(p, params);
    row.support_cutoff = rigidity_support_cutoff(p, params);
    row.median_deviation = quantile(devs[k], 0.5);
    row.max_deviation = devs[k].empty() ? kNaN : *std::max_element(devs[k].begin(), devs[k].end());
    for (double s : cfg.s_grid) {
      RigidityPoint pt;
      pt.s = s;
      const int hits = static_cast<int>(std::count_if(devs[k].begin(), devs[k].end(), [&](double d) { return d >= s; }));
      pt.empirical = empirical_frequency(hits, trials);
      pt.bound = bound_individual(cfg.constants, p, s, params, RangePolicy::informational);
      row.points.push_back(pt);
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

RigidityReport run_rigidity_experiment(const ExperimentConfig& cfg) {
  return run_rigidity_experiment(cfg, sample_spectra(cfg.params.with_rescaled(false), cfg.trials, cfg.seed, cfg.threads));
}

JackknifeVariance jackknife_complex_variance(const std::vector<Complex>& values) {
  const std::size_t t = values.size();
  JackknifeVariance out;
  if (t < 2) return out;
  Complex mean = 0.0;
  for (const auto& v : values) mean += v;
  mean /= static_cast<double>(t);
  double s2 = 0.0;
  for (const auto& v : values) s2 += std::norm(v - mean);
  out.variance = s2 / (t - 1);
  if (t < 3) return out;
  std::vector<double> loo(t);
  double loo_mean = 0.0;
  for (std::size_t i = 0; i < t; ++i) {
    const Complex x = values[i] - mean;
    // Deleting x shifts the mean by -x / (t - 1).
    loo[i] = (s2 - std::norm(x) * t / (t - 1.0)) / (t - 2.0);
    loo_mean += loo[i];
  }
  loo_mean /= t;
  double acc = 0.0;
  for (double v : loo) acc += (v - loo_mean) * (v - loo_mean);
  out.std_error = std::sqrt((t - 1.0) / t * acc);
  return out;
}

VarianceReport run_variance_experiment(const ExperimentConfig& cfg, const SpectrumBatch& batch) {
  require_unrescaled(batch, "run_variance_experiment");
  const EnsembleParams& params = batch.params;
  check_targets(cfg.p_targets, params, "run_variance_experiment");
  const auto cols = eigenvalue_columns(batch, cfg.p_targets, cfg.order);

  VarianceReport report;
  report.params = params;
  report.trials = batch.trials();
  report.failures = batch.failures;
  for (std::size_t k = 0; k < cfg.p_targets.size(); ++k) {
    const int p = cfg.p_targets[k];
    const JackknifeVariance jk = jackknife_complex_variance(cols[k]);
    VarianceRow row;
    row.p = p;
    row.admissible = eigenvalue_index_admissible(p, params);
    row.empirical_variance = jk.variance;
    row.jackknife_se = jk.std_error;
    row.scaling = std::sqrt(p * std::log(p + 1.0)) / params.n();
    report.rows.push_back(row);
  }
  return report;
}

VarianceReport run_variance_experiment(const ExperimentConfig& cfg) {
  return run_variance_experiment(cfg, sample_spectra(cfg.params.with_rescaled(false), cfg.trials, cfg.seed, cfg.threads));
}

double dbl_proxy(const SpectrumSample& rescaled_sample, const EnsembleParams& params) {
  if (!rescaled_sample.rescaled) throw std::invalid_argument("dbl_proxy: sample must be rescaled");
  if (static_cast<int>(rescaled_sample.size()) != params.m()) {
    throw std::invalid_argument("dbl_proxy: sample size differs from m");
  }
  const double scale = std::sqrt(static_cast<double>(params.n()) / params.m());
  const std::vector<Complex> lattice = predicted_lattice(params).as_sample(true, scale).values();
  const std::vector<Complex> sample = rescaled_sample.values();
  return wasserstein1_uniform(sample, lattice);
}

DblReport run_dbl_experiment(const std::vector<SpectrumBatch>& batches) {
  DblReport report;
  for (const auto& batch : batches) {
    if (!batch.params.rescaled()) throw std::invalid_argument("run_dbl_experiment: batches must be rescaled");
    DblRow row;
    row.n = batch.params.n();
    row.m = batch.params.m();
    row.trials = batch.trials();
    for (const auto& s : batch.samples) row.proxies.push_back(dbl_proxy(s, batch.params));
    row.median_proxy = quantile(row.proxies, 0.5);
    row.q90_proxy = quantile(row.proxies, 0.9);
    row.bound_at_median = bound_dbl(batch.params)(row.median_proxy);
    report.rows.push_back(std::move(row));
  }
  return report;
}

DblReport run_dbl_experiment(const ExperimentConfig& cfg) {
  const double alpha = cfg.params.alpha();
  std::vector<SpectrumBatch> batches;
  for (int m : cfg.m_values) {
    const int n = static_cast<int>(std::lround(m / alpha));
    batches.push_back(sample_spectra(EnsembleParams(n, m, true), cfg.trials, cfg.seed, cfg.threads));
  }
  return run_dbl_experiment(batches);
}

double calibrate_bernstein(const KernelContext& ctx, const std::vector<CountingRegion>& regions,
                           const std::vector<double>& t_grid, bool* constrained) {
  const EnsembleParams& params = ctx.params();
  double need = 0.0;
  bool any = false;
  for (const auto& region : regions) {
    if (region.kind() != CountingRegion::Kind::sector) continue;
    const int i = region.index();
    const CountDistribution dist = count_distribution(ctx, region);
    const double center = nominal_center(params, region);
    const double mean = expected_count_exact(ctx, region);
    const double spread = i * std::sqrt(std::log(static_cast<double>(i)));
    for (double t : t_grid) {
      if (!(t > 0.0)) continue;
      const double tail = std::max(dist.two_sided_tail(center, t), dist.two_sided_tail(mean, t));
      if (tail <= 0.0) continue;
      if (2.0 * kE * kE * std::exp(-t / 4.0) < tail) {
        throw NumericalError("calibrate_bernstein: tail " + std::to_string(tail) + " of " + region.label() +
                             " at t=" + std::to_string(t) + " exceeds the linear branch; no constant dominates");
      }
      if (spread <= 0.0) continue;  // i = 1: only the linear branch is active
      need = std::max(need, t * t / (spread * std::log(2.0 * kE * kE / tail)));
      any = true;
    }
  }
  if (constrained) *constrained = any;
  return snap_up(need);
}

double individual_bound_quantile(const TheoremConstants& consts, int p, double level) {
  if (!(level > 0.0 && level < 2.0)) throw std::invalid_argument("individual_bound_quantile: level outside (0, 2)");
  const int l = shell_index(p);
  const double spread = l * std::sqrt(std::log(static_cast<double>(l)));
  return std::sqrt(consts.C_alpha_individual * spread * std::log(2.0 / level));
}

Calibration calibrate_constants(const ExperimentConfig& cfg, const SpectrumBatch& batch) {
  require_unrescaled(batch, "calibrate_constants");
  const EnsembleParams& params = batch.params;
  check_targets(cfg.p_targets, params, "calibrate_constants");
  Calibration cal;
  cal.constants = TheoremConstants::for_alpha(params.alpha());

  const KernelContext ctx(params);
  cal.constants.C_alpha_bernstein = calibrate_bernstein(ctx, cfg.regions, cfg.t_grid, &cal.bernstein_constrained);

  const int trials = batch.trials();
  std::vector<int> ps;
  for (int p : cfg.p_targets)
    if (shell_index(p) >= 2) ps.push_back(p);

  // Rigidity: small-s needs C >= s^2 / (l sqrt(log l) log(2 / ucl)); large-s needs c <= log(2 / ucl) / s^2.
  double small_need = 0.0;
  double large_limit = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> devs(ps.size());
  for (const auto& sample : batch.samples) {
    const SpectrumSample sorted = spiral_sort(sample, batch.params, cfg.order);
    for (std::size_t k = 0; k < ps.size(); ++k) devs[k].push_back(scaled_deviation(sorted, ps[k], params));
  }
  for (std::size_t k = 0; k < ps.size(); ++k) {
    const int l = shell_index(ps[k]);
    const double spread = l * std::sqrt(std::log(static_cast<double>(l)));
    const double cutoff = rigidity_support_cutoff(ps[k], params);
    for (double s : cfg.s_grid) {
      if (!(s > 0.0) || s > cutoff) continue;
      const int hits = static_cast<int>(std::count_if(devs[k].begin(), devs[k].end(), [&](double d) { return d >= s; }));
      const double ucl = empirical_frequency(hits, trials).upper_limit(trials);
      if (s <= kTwoPi * (l - 1)) {
        small_need = std::max(small_need, s * s / (spread * std::log(2.0 / ucl)));
        cal.individual_small_constrained = true;
      } else {
        large_limit = std::min(large_limit, std::log(2.0 / ucl) / (s * s));
        cal.individual_large_constrained = true;
      }
    }
  }
  cal.constants.C_alpha_individual = snap_up(small_need);
  cal.constants.c_alpha_individual = cal.individual_large_constrained ? snap_down(large_limit) : 0.0;

  double var_need = 0.0;
  const auto cols = eigenvalue_columns(batch, ps, cfg.order);
  for (std::size_t k = 0; k < ps.size(); ++k) {
    const JackknifeVariance jk = jackknife_complex_variance(cols[k]);
    const double scaling = std::sqrt(ps[k] * std::log(ps[k] + 1.0)) / params.n();
    var_need = std::max(var_need, (jk.variance + 3.0 * jk.std_error) / scaling);
    cal.variance_constrained = true;
  }
  cal.constants.C_alpha_variance = snap_up(var_need);
  return cal;
}

Calibration calibrate_constants(const ExperimentConfig& cfg) {
  return calibrate_constants(cfg, sample_spectra(cfg.params.with_rescaled(false), cfg.trials, cfg.seed, cfg.threads));
}

}  // namespace rigidity
