#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>

#include <Eigen/Dense>

namespace rigidity {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// Raised when a numerical routine cannot deliver its contract (CLI exit code 3).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Ensemble of m x m truncations of n x n Haar unitaries.
///
/// With `rescaled` set, truncations (and their eigenvalues) are multiplied by
/// sqrt(n/m) so that the limiting spectral measure lives on the unit disc.
class EnsembleParams {
 public:
  EnsembleParams(int n, int m, bool rescaled = false);

  int n() const { return n_; }
  int m() const { return m_; }
  bool rescaled() const { return rescaled_; }
  double alpha() const { return static_cast<double>(m_) / n_; }
  double scale() const;

  EnsembleParams with_rescaled(bool rescaled) const { return {n_, m_, rescaled}; }

  /// Throws std::invalid_argument unless alpha lies in (delta, 1 - delta).
  void require_alpha_window(double delta) const;

 private:
  int n_;
  int m_;
  bool rescaled_;
};

/// Deterministic pseudo-random stream.
///
/// A stream is identified by (master seed, index); substreams are derived
/// with a counter-based splitmix64 mix, so trial k of a run is reproducible
/// independently of the order in which trials execute.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed, std::uint64_t index = 0);

  RandomStream substream(std::uint64_t index) const;

  std::uint64_t seed() const { return seed_; }
  std::uint64_t index() const { return index_; }

  /// Standard complex Gaussian: independent real and imaginary parts,
  /// mean 0 and variance 1/2 each.
  Complex complex_gaussian();

  std::mt19937_64& engine() { return engine_; }

 private:
  std::uint64_t seed_;
  std::uint64_t index_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, std::sqrt(0.5)};
};

std::uint64_t splitmix64(std::uint64_t x);

/// n x n matrix of iid standard complex Gaussians, filled column by column.
ComplexMatrix sample_ginibre(const EnsembleParams& params, RandomStream& stream);

/// Haar unitary via Householder QR of a Ginibre matrix with the phases of
/// diag(R) folded back into the columns of Q. Retries once on a degenerate
/// draw, then throws NumericalError.
ComplexMatrix haar_unitary(const EnsembleParams& params, RandomStream& stream);
/// Same, for any dimension n >= 1.
ComplexMatrix haar_unitary(int n, RandomStream& stream);

/// Top-left m x m block, times sqrt(n/m) when params.rescaled().
ComplexMatrix truncate(const ComplexMatrix& u, const EnsembleParams& params);

/// Same matrix as truncate(haar_unitary(params, stream), params) for the same
/// stream state, but only the first m columns of the unitary are formed.
ComplexMatrix sample_truncation(const EnsembleParams& params, RandomStream& stream);

/// max_{ij} |(U^H U - I)_{ij}|
double unitarity_defect(const ComplexMatrix& u);

}  // namespace rigidity
