#include "rigidity/dpp_analytics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "rigidity/eigensolver.hpp"
#include "rigidity/special_functions.hpp"

namespace rigidity {

namespace {

constexpr double kLogPi = 1.1447298858494001741434273513531;
constexpr double kClampSlack = 1e-10;

double one_minus_square(double r) { return (1.0 - r) * (1.0 + r); }

void require_unit_disc(Complex z, const char* who) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw std::invalid_argument(std::string(who) + ": non-finite argument");
  }
  if (std::abs(z) > 1.0) throw std::invalid_argument(std::string(who) + ": argument outside the unit disc");
}

void require_sector(const CountingRegion& region, const char* who) {
  if (region.kind() != CountingRegion::Kind::sector) {
    throw std::invalid_argument(std::string(who) + ": region must be a sector region A_{i,theta}");
  }
}

// int over r^2 in [inner, outer] of the radial weight, relative to sqrt(N_{j+1} N_{k+1}).
double normalized_overlap_quadrature(const KernelContext& ctx, int j, int k, const SquaredRadius& inner,
                                     const SquaredRadius& outer) {
  const int g = ctx.gap();
  const double log_scale = -0.5 * (ctx.log_normalizer(j + 1) + ctx.log_normalizer(k + 1));
  const double power = j + k + 1.0;
  auto integrand = [&](double r) {
    if (r <= 0.0) return 0.0;
    const double w = one_minus_square(r);
    if (w <= 0.0) return g == 1 ? std::exp(power * std::log(r) + log_scale) : 0.0;
    return std::exp((g - 1.0) * std::log(w) + power * std::log(r) + log_scale);
  };
  return integrate_adaptive(integrand, std::sqrt(inner.value), std::sqrt(outer.value), 1e-10, 1e-300);
}

}  // namespace

KernelContext::KernelContext(const EnsembleParams& params) : params_(params.with_rescaled(false)) {
  const int g = gap();
  log_normalizers_.reserve(params_.m());
  // N_j = pi B(j, n - m)
  for (int j = 1; j <= params_.m(); ++j) log_normalizers_.push_back(kLogPi + log_beta(j, g));
}

Complex kernel_eval(const KernelContext& ctx, Complex z1, Complex z2) {
  require_unit_disc(z1, "kernel_eval");
  require_unit_disc(z2, "kernel_eval");
  const int g = ctx.gap();
  const double r1 = std::abs(z1);
  const double r2 = std::abs(z2);
  const double w1 = one_minus_square(r1);
  const double w2 = one_minus_square(r2);
  double log_weight = 0.0;
  if (g > 1) {
    if (w1 == 0.0 || w2 == 0.0) return {0.0, 0.0};
    log_weight = 0.5 * (g - 1.0) * (std::log(w1) + std::log(w2));
  }
  if (r1 == 0.0 || r2 == 0.0) return {std::exp(log_weight - ctx.log_normalizer(1)), 0.0};

  const double log_rr = std::log(r1) + std::log(r2);
  const double dphi = std::arg(z1) - std::arg(z2);
  std::vector<double> logs(ctx.m());
  for (int j = 1; j <= ctx.m(); ++j) logs[j - 1] = -ctx.log_normalizer(j) + (j - 1) * log_rr;
  const double top = *std::max_element(logs.begin(), logs.end());
  Complex sum = 0.0;
  for (int j = 1; j <= ctx.m(); ++j) sum += std::polar(std::exp(logs[j - 1] - top), (j - 1) * dphi);
  return sum * std::exp(top + log_weight);
}

double kzz_diag(const KernelContext& ctx, Complex z) {
  require_unit_disc(z, "kzz_diag");
  const double r = std::abs(z);
  if (r >= 1.0) throw std::invalid_argument("kzz_diag: requires |z| < 1");
  const double x = r * r;
  const double y = one_minus_square(r);
  const int g = ctx.gap();
  // m f_alpha(z) = (n - m) / (pi (1 - x)^2), and
  // 1 - P[Y_{n-m+1}(x) >= m] = P[Y_{n-m+1}(x) <= m - 1] = I_{1-x}(n - m + 1, m).
  const double keep = incomplete_beta(g + 1.0, ctx.m(), y, x);
  return g / (M_PI * y * y) * keep;
}

double limiting_density(const EnsembleParams& params, Complex z, Convention convention) {
  const double a = params.alpha();
  const double x = std::norm(z);
  if (convention == Convention::raw) {
    if (x >= a) return 0.0;
    const double w = 1.0 - x;
    return (1.0 - a) / (M_PI * a * w * w);
  }
  if (x >= 1.0) return 0.0;
  const double w = 1.0 - a * x;
  return (1.0 - a) / (M_PI * w * w);
}

double region_mass(const EnsembleParams& params, const CountingRegion& region) {
  const double edge = std::sqrt(params.alpha());
  const double outer = region.outer_radius(params);
  if (outer > edge * (1.0 + 1e-12)) {
    throw std::domain_error("region_mass: region " + region.label() + " reaches radius " + std::to_string(outer) +
                            " beyond the support radius " + std::to_string(edge));
  }
  const double m = params.m();
  const double i = region.index();
  switch (region.kind()) {
    case CountingRegion::Kind::disc:
      return i * i / m;
    case CountingRegion::Kind::sector:
      return (i * i + region.theta() / kTwoPi * (2.0 * i + 1.0)) / m;
    case CountingRegion::Kind::annulus:
      return (2.0 * i - 1.0) / m;
    case CountingRegion::Kind::custom_disc: {
      const double r = region.custom_radius();
      const double a = params.alpha();
      return (1.0 - a) / a * r * r / one_minus_square(r);
    }
  }
  return 0.0;
}

double radial_overlap(const KernelContext& ctx, int j, int k, double a, double b) {
  if (j < 0 || k < 0 || j >= ctx.m() || k >= ctx.m()) {
    throw std::invalid_argument("radial_overlap: indices must lie in [0, m-1]");
  }
  if (!(a >= 0.0) || !(a <= b) || !(b <= 1.0)) {
    throw std::invalid_argument("radial_overlap: need 0 <= a <= b <= 1");
  }
  const double scale = std::exp(0.5 * (ctx.log_normalizer(j + 1) + ctx.log_normalizer(k + 1)));
  return scale * normalized_radial_overlap(ctx, j, k, {a * a, one_minus_square(a)}, {b * b, one_minus_square(b)});
}

double normalized_radial_overlap(const KernelContext& ctx, int j, int k, const SquaredRadius& inner,
                                 const SquaredRadius& outer) {
  const int g = ctx.gap();
  if (j == k) {
    // (1 / N_{j+1}) * (1/2) B(j + 1, g) = 1 / (2 pi)
    const double d = incomplete_beta_interval(j + 1.0, g, inner.value, inner.complement, outer.value,
                                              outer.complement);
    if (std::isfinite(d)) return d / kTwoPi;
    return normalized_overlap_quadrature(ctx, j, k, inner, outer);
  }
  // u = r^2: (1/2) B(s + 1, g) [I_outer - I_inner](s + 1, g), s = (j + k) / 2
  const double a = 0.5 * (j + k) + 1.0;
  const double d = incomplete_beta_interval(a, g, inner.value, inner.complement, outer.value, outer.complement);
  if (!std::isfinite(d)) return normalized_overlap_quadrature(ctx, j, k, inner, outer);
  const double log_front = std::log(0.5) + log_beta(a, g) - 0.5 * (ctx.log_normalizer(j + 1) + ctx.log_normalizer(k + 1));
  return std::exp(log_front) * d;
}

ComplexMatrix gram_matrix(const KernelContext& ctx, const CountingRegion& region) {
  if (region.outer_radius(ctx.params()) > 1.0) {
    throw std::invalid_argument("gram_matrix: region extends outside the unit disc");
  }
  const int m = ctx.m();
  ComplexMatrix gram = ComplexMatrix::Zero(m, m);
  for (const RegionPiece& piece : region_pieces(region, ctx.params())) {
    const bool full_turn = piece.angle >= kTwoPi;
    for (int j = 0; j < m; ++j) {
      gram(j, j) += normalized_radial_overlap(ctx, j, j, piece.inner, piece.outer) * piece.angle;
      if (full_turn) continue;
      for (int k = j + 1; k < m; ++k) {
        const double d = j - k;
        // int_0^theta e^{i (j - k) phi} dphi
        const Complex arc = (std::polar(1.0, d * piece.angle) - 1.0) / Complex(0.0, d);
        gram(j, k) += normalized_radial_overlap(ctx, j, k, piece.inner, piece.outer) * arc;
      }
    }
  }
  for (int j = 0; j < m; ++j) {
    gram(j, j) = gram(j, j).real();
    for (int k = j + 1; k < m; ++k) gram(k, j) = std::conj(gram(j, k));
  }
  return gram;
}

BernoulliSpectrum bernoulli_spectrum(const KernelContext& ctx, const CountingRegion& region) {
  const EigenvalueSet eig = hermitian_eigenvalues(gram_matrix(ctx, region));
  BernoulliSpectrum out{{}, region};
  out.probs.reserve(eig.values.size());
  for (const auto& z : eig.values) {
    const double p = z.real();
    if (p < -kClampSlack || p > 1.0 + kClampSlack) {
      throw NumericalError("bernoulli_spectrum: Gram eigenvalue " + std::to_string(p) + " outside [0, 1] for " +
                           region.label());
    }
    out.probs.push_back(std::clamp(p, 0.0, 1.0));
  }
  return out;
}

double expected_count_exact(const KernelContext& ctx, const CountingRegion& region) {
  double total = 0.0;
  for (const RegionPiece& piece : region_pieces(region, ctx.params())) {
    double tails = 0.0;
    for (int j = 0; j < ctx.m(); ++j) tails += normalized_radial_overlap(ctx, j, j, piece.inner, piece.outer);
    total += tails * piece.angle;
  }
  return total;
}

double variance_exact_spectral(const KernelContext& ctx, const CountingRegion& region) {
  const BernoulliSpectrum bern = bernoulli_spectrum(ctx, region);
  double v = 0.0;
  for (double p : bern.probs) v += p * (1.0 - p);
  return v;
}

VarianceTerms variance_terms(const KernelContext& ctx, const CountingRegion& sector) {
  require_sector(sector, "variance_exact_decomposed");
  const int g = ctx.gap();
  const int i = sector.index();
  const double theta = sector.theta();
  if (!(theta > 0.0) || theta > kTwoPi) throw std::invalid_argument("variance_exact_decomposed: theta outside (0, 2pi]");
  const bool full_turn = theta >= kTwoPi;
  const double w = full_turn ? 1.0 : theta / kTwoPi;
  const SquaredRadius lo = squared_radius(i, ctx.params());
  const SquaredRadius hi = squared_radius(i + 1, ctx.params());

  VarianceTerms v;
  for (int j = 0; j < ctx.m(); ++j) {
    // P[Y_j > j], Y_j ~ Bin(n-m+j, r_i^2); P[X_j <= j], X_j ~ Bin(n-m+j, r_{i+1}^2)
    const double inside = incomplete_beta(j + 1.0, g, lo.value, lo.complement);
    const double outside = incomplete_beta_complement(j + 1.0, g, hi.value, hi.complement);
    const double ring = incomplete_beta_interval(j + 1.0, g, lo.value, lo.complement, hi.value, hi.complement);
    v.v1 += inside * outside;
    v.v2 += inside * ring;
    v.v3 += ring * outside;
    v.v4 += ring * ring;
  }
  v.v2 *= 1.0 - w;
  v.v3 *= w;
  v.v4 *= w * (1.0 - w);
  if (!full_turn) {
    double cross = 0.0;
    for (int j = 0; j < ctx.m(); ++j) {
      for (int k = j + 1; k < ctx.m(); ++k) {
        const double d = k - j;
        const double radial = normalized_radial_overlap(ctx, j, k, lo, hi);
        const double s = std::sin(0.5 * d * theta);
        cross += radial * radial * 4.0 * s * s / (d * d);
      }
    }
    v.v4 -= 2.0 * cross;  // (j, k) and (k, j)
  }
  return v;
}

double variance_exact_decomposed(const KernelContext& ctx, const CountingRegion& sector) {
  return variance_terms(ctx, sector).total();
}

double CountDistribution::two_sided_tail(double center, double t) const {
  double tail = 0.0;
  for (std::size_t k = 0; k < pmf.size(); ++k) {
    if (std::abs(static_cast<double>(k) - center) >= t) tail += pmf[k];
  }
  return std::min(tail, 1.0);
}

CountDistribution poisson_binomial(std::span<const double> probs) {
  CountDistribution out;
  out.pmf.assign(probs.size() + 1, 0.0);
  out.pmf[0] = 1.0;
  std::size_t filled = 0;
  for (double p : probs) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("poisson_binomial: probability outside [0, 1]");
    ++filled;
    for (std::size_t k = filled; k > 0; --k) out.pmf[k] = out.pmf[k] * (1.0 - p) + out.pmf[k - 1] * p;
    out.pmf[0] *= 1.0 - p;
  }
  double mean = 0.0;
  for (std::size_t k = 0; k < out.pmf.size(); ++k) mean += k * out.pmf[k];
  double var = 0.0;
  for (std::size_t k = 0; k < out.pmf.size(); ++k) {
    const double d = k - mean;
    var += d * d * out.pmf[k];
  }
  out.mean = mean;
  out.variance = var;
  return out;
}

CountDistribution count_distribution(const KernelContext& ctx, const CountingRegion& region) {
  const BernoulliSpectrum bern = bernoulli_spectrum(ctx, region);
  return poisson_binomial(bern.probs);
}

}  // namespace rigidity
