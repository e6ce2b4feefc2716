#pragma once

#include <span>
#include <vector>

#include "rigidity/ensemble.hpp"
#include "rigidity/spectral_geometry.hpp"

namespace rigidity {

/// Immutable per-ensemble data for the truncation kernel
///
///   K(z, w) = sum_{j=1}^m phi_j(z) conj(phi_j(w)),
///   phi_j(z) = z^{j-1} (1 - |z|^2)^{(n-m-1)/2} / sqrt(N_j),
///   N_j = pi (j-1)! (n-m-1)! / (n-m+j-1)!.
///
/// Always works in unrescaled coordinates; the rescaled flag of the params is
/// ignored.
class KernelContext {
 public:
  explicit KernelContext(const EnsembleParams& params);

  const EnsembleParams& params() const { return params_; }
  int m() const { return params_.m(); }
  /// n - m
  int gap() const { return params_.n() - params_.m(); }

  /// log N_j for j = 1..m.
  double log_normalizer(int j) const { return log_normalizers_.at(j - 1); }

 private:
  EnsembleParams params_;
  std::vector<double> log_normalizers_;
};

/// K(z1, z2); requires |z1|, |z2| <= 1 and finite inputs.
Complex kernel_eval(const KernelContext& ctx, Complex z1, Complex z2);

/// K(z, z) via m f_alpha(z) [1 - P(Y_{n-m+1}(|z|^2) >= m)] with the
/// negative-binomial tail in closed form; requires |z| < 1.
double kzz_diag(const KernelContext& ctx, Complex z);

enum class Convention { raw, rescaled };

/// f_alpha (raw, support |z| < sqrt(alpha)) or g_alpha (rescaled, support |z| < 1).
double limiting_density(const EnsembleParams& params, Complex z, Convention convention);

/// mu_alpha(region) in closed form; the region must lie inside |z| <= sqrt(alpha).
double region_mass(const EnsembleParams& params, const CountingRegion& region);

/// int_a^b (1 - r^2)^{n-m-1} r^{j+k+1} dr for 0 <= j, k <= m - 1 and 0 <= a <= b <= 1.
double radial_overlap(const KernelContext& ctx, int j, int k, double a, double b);

/// The same integral over r^2 in [inner, outer], divided by
/// sqrt(N_{j+1} N_{k+1}). Twice pi times the j = k value is the binomial-tail
/// difference P[Bin(n-m+j, outer) > j] - P[Bin(n-m+j, inner) > j].
double normalized_radial_overlap(const KernelContext& ctx, int j, int k, const SquaredRadius& inner,
                                 const SquaredRadius& outer);

/// Gram matrix M_{jk} = int_D phi_j conj(phi_k) dA of the kernel's
/// eigenfunctions over the region; its eigenvalues are those of K restricted to D.
ComplexMatrix gram_matrix(const KernelContext& ctx, const CountingRegion& region);

/// Means of the independent Bernoulli variables whose sum has the law of the
/// region count.
struct BernoulliSpectrum {
  std::vector<double> probs;
  CountingRegion region;
};

/// Eigenvalues of the Gram matrix, clamped to [0, 1]. Values outside
/// [-1e-10, 1 + 1e-10] raise NumericalError.
BernoulliSpectrum bernoulli_spectrum(const KernelContext& ctx, const CountingRegion& region);

/// E[count] = trace of the Gram matrix, as a sum of binomial tails.
double expected_count_exact(const KernelContext& ctx, const CountingRegion& region);

/// sum_k p_k (1 - p_k) over the Bernoulli spectrum.
double variance_exact_spectral(const KernelContext& ctx, const CountingRegion& region);

/// Four-term split of Var(count) for a sector region A_{i,theta}:
/// V1 disc x exterior, V2 disc x complementary arc, V3 arc x exterior,
/// V4 arc x complementary arc (including the negative cross terms).
struct VarianceTerms {
  double v1 = 0.0;
  double v2 = 0.0;
  double v3 = 0.0;
  double v4 = 0.0;

  double total() const { return v1 + v2 + v3 + v4; }
};

VarianceTerms variance_terms(const KernelContext& ctx, const CountingRegion& sector);
double variance_exact_decomposed(const KernelContext& ctx, const CountingRegion& sector);

/// Law of a count on {0, ..., K}.
struct CountDistribution {
  std::vector<double> pmf;
  double mean = 0.0;
  double variance = 0.0;

  /// P[|N - center| >= t]
  double two_sided_tail(double center, double t) const;
};

/// Poisson-binomial law by sequential convolution of Bernoulli factors.
CountDistribution poisson_binomial(std::span<const double> probs);

CountDistribution count_distribution(const KernelContext& ctx, const CountingRegion& region);

}  // namespace rigidity
