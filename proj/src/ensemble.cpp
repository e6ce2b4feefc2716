#include "rigidity/ensemble.hpp"

#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace rigidity {

EnsembleParams::EnsembleParams(int n, int m, bool rescaled) : n_(n), m_(m), rescaled_(rescaled) {
  if (m < 1 || n <= m) {
    throw std::invalid_argument("ensemble requires 1 <= m < n (got n=" + std::to_string(n) +
                                ", m=" + std::to_string(m) + ")");
  }
}

double EnsembleParams::scale() const {
  return rescaled_ ? std::sqrt(static_cast<double>(n_) / m_) : 1.0;
}

void EnsembleParams::require_alpha_window(double delta) const {
  const double a = alpha();
  if (!(delta > 0.0) || a <= delta || a >= 1.0 - delta) {
    throw std::invalid_argument("alpha = " + std::to_string(a) + " outside (" + std::to_string(delta) +
                                ", " + std::to_string(1.0 - delta) + ")");
  }
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

namespace {

std::mt19937_64 seeded_engine(std::uint64_t seed, std::uint64_t index) {
  const std::uint64_t a = splitmix64(seed);
  const std::uint64_t b = splitmix64(a ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
  std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
  return std::mt19937_64(seq);
}

// Householder QR restricted to the first `cols` columns of `a` (in place).
// Returns Q(:, 0:cols) with column j multiplied by the phase of R(j, j),
// or nothing when a column collapses to zero.
std::optional<ComplexMatrix> phase_corrected_q(ComplexMatrix a, int cols) {
  const int n = static_cast<int>(a.rows());
  std::vector<ComplexVector> reflectors;
  std::vector<Complex> phases;
  reflectors.reserve(cols);
  phases.reserve(cols);

  for (int j = 0; j < cols; ++j) {
    const int len = n - j;
    ComplexVector v = a.col(j).tail(len);
    const double norm = v.norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) return std::nullopt;
    const Complex x0 = v(0);
    const Complex unit = std::abs(x0) > 0.0 ? x0 / std::abs(x0) : Complex(1.0, 0.0);
    const Complex diag = -unit * norm;  // R(j, j)
    v(0) -= diag;
    const double vnorm2 = v.squaredNorm();
    if (vnorm2 > 0.0) {
      for (int c = j + 1; c < cols; ++c) {
        auto col = a.col(c).tail(len);
        const Complex w = v.dot(col);  // v^H col
        col -= (2.0 / vnorm2) * w * v;
      }
    }
    reflectors.push_back(std::move(v));
    phases.push_back(diag / std::abs(diag));
  }

  ComplexMatrix q = ComplexMatrix::Identity(n, cols);
  for (int j = cols - 1; j >= 0; --j) {
    const ComplexVector& v = reflectors[j];
    const double vnorm2 = v.squaredNorm();
    if (vnorm2 == 0.0) continue;
    const int len = n - j;
    for (int c = j; c < cols; ++c) {
      auto col = q.col(c).tail(len);
      const Complex w = v.dot(col);
      col -= (2.0 / vnorm2) * w * v;
    }
  }
  for (int j = 0; j < cols; ++j) q.col(j) *= phases[j];
  return q;
}

ComplexMatrix ginibre_columns(int n, int cols, RandomStream& stream) {
  ComplexMatrix g(n, cols);
  for (int c = 0; c < cols; ++c)
    for (int r = 0; r < n; ++r) g(r, c) = stream.complex_gaussian();
  return g;
}

ComplexMatrix haar_columns(int n, int cols, RandomStream& stream) {
  for (int attempt = 0; attempt < 2; ++attempt) {
    if (auto q = phase_corrected_q(ginibre_columns(n, n, stream), cols)) return *std::move(q);
  }
  throw NumericalError("Haar sampling: orthogonalization failed twice (degenerate Ginibre draw)");
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t index)
    : seed_(seed), index_(index), engine_(seeded_engine(seed, index)) {}

RandomStream RandomStream::substream(std::uint64_t index) const { return RandomStream(seed_, index); }

Complex RandomStream::complex_gaussian() {
  const double re = normal_(engine_);
  const double im = normal_(engine_);
  return {re, im};
}

ComplexMatrix sample_ginibre(const EnsembleParams& params, RandomStream& stream) {
  return ginibre_columns(params.n(), params.n(), stream);
}

// The full n x n Ginibre matrix is always drawn so that both entry points
// consume the stream identically; Householder column j only reads columns <= j.
ComplexMatrix haar_unitary(const EnsembleParams& params, RandomStream& stream) {
  return haar_columns(params.n(), params.n(), stream);
}

ComplexMatrix haar_unitary(int n, RandomStream& stream) {
  if (n < 1) throw std::invalid_argument("haar_unitary: n must be >= 1");
  return haar_columns(n, n, stream);
}

ComplexMatrix sample_truncation(const EnsembleParams& params, RandomStream& stream) {
  const ComplexMatrix q = haar_columns(params.n(), params.m(), stream);
  ComplexMatrix block = q.topRows(params.m());
  if (params.rescaled()) block *= params.scale();
  return block;
}

ComplexMatrix truncate(const ComplexMatrix& u, const EnsembleParams& params) {
  if (u.rows() != params.n() || u.cols() != params.n()) {
    throw std::invalid_argument("truncate: expected a " + std::to_string(params.n()) + "x" +
                                std::to_string(params.n()) + " matrix, got " + std::to_string(u.rows()) +
                                "x" + std::to_string(u.cols()));
  }
  ComplexMatrix block = u.topLeftCorner(params.m(), params.m());
  if (params.rescaled()) block *= params.scale();
  return block;
}

double unitarity_defect(const ComplexMatrix& u) {
  const ComplexMatrix d = u.adjoint() * u - ComplexMatrix::Identity(u.cols(), u.cols());
  return d.cwiseAbs().maxCoeff();
}

}  // namespace rigidity
