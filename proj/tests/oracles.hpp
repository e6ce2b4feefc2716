#pragma once

// Independent reference computations for the tests. Nothing here calls into
// the library's numerics: sums are done term by term, integrals by adaptive
// Simpson, small problems by brute force.

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

namespace oracle {

using cd = std::complex<double>;

inline double log_choose(int n, int k) { return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0); }

/// P[Bin(N, p) > k], summed term by term in log space.
inline double binom_sf(int N, int k, double p) {
  if (k >= N) return 0.0;
  if (k < 0) return 1.0;
  if (p <= 0.0) return 0.0;
  if (p >= 1.0) return 1.0;
  const double lp = std::log(p), lq = std::log1p(-p);
  double s = 0.0;
  for (int j = k + 1; j <= N; ++j) s += std::exp(log_choose(N, j) + j * lp + (N - j) * lq);
  return std::min(s, 1.0);
}

inline double binom_cdf(int N, int k, double p) {
  if (k < 0) return 0.0;
  if (k >= N) return 1.0;
  const double lp = std::log(p), lq = std::log1p(-p);
  double s = 0.0;
  for (int j = 0; j <= k; ++j) s += std::exp(log_choose(N, j) + j * lp + (N - j) * lq);
  return std::min(s, 1.0);
}

/// Adaptive Simpson to absolute tolerance `tol`.
inline double simpson(const std::function<double(double)>& f, double a, double b, double tol, int depth = 50) {
  std::function<double(double, double, double, double, double, double, double, int)> rec =
      [&](double lo, double hi, double flo, double fmid, double fhi, double whole, double eps, int d) {
        const double mid = 0.5 * (lo + hi);
        const double lm = 0.5 * (lo + mid), rm = 0.5 * (mid + hi);
        const double flm = f(lm), frm = f(rm);
        const double left = (mid - lo) / 6.0 * (flo + 4 * flm + fmid);
        const double right = (hi - mid) / 6.0 * (fmid + 4 * frm + fhi);
        if (d <= 0 || std::abs(left + right - whole) <= 15 * eps) return left + right + (left + right - whole) / 15.0;
        return rec(lo, mid, flo, flm, fmid, left, eps / 2, d - 1) + rec(mid, hi, fmid, frm, fhi, right, eps / 2, d - 1);
      };
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  return rec(a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4 * fm + fb), tol, depth);
}

/// K(z1, z2) by the defining sum with normalizers from lgamma.
inline cd kernel(int n, int m, cd z1, cd z2) {
  const int g = n - m;
  const double w = std::pow((1 - std::norm(z1)) * (1 - std::norm(z2)), 0.5 * (g - 1));
  cd s = 0.0, power = 1.0;
  const cd base = z1 * std::conj(z2);
  for (int j = 1; j <= m; ++j) {
    const double log_nj = std::log(M_PI) + std::lgamma(j) + std::lgamma(g) - std::lgamma(g + j);
    s += power * std::exp(-log_nj);
    power *= base;
  }
  return s * w;
}

/// f_alpha(z) = (1 - alpha) / (pi alpha (1 - |z|^2)^2) inside |z| < sqrt(alpha).
inline double f_alpha(double alpha, double r) {
  if (r * r >= alpha) return 0.0;
  return (1 - alpha) / (M_PI * alpha * (1 - r * r) * (1 - r * r));
}

/// int_a^b (1 - r^2)^{g-1} r^{j+k+1} dr by adaptive Simpson.
inline double radial(int g, int j, int k, double a, double b) {
  return simpson([&](double r) { return std::pow(1 - r * r, g - 1) * std::pow(r, j + k + 1); }, a, b, 1e-16);
}

/// Law of a sum of independent Bernoullis by enumerating all 2^K outcomes.
inline std::vector<double> poisson_binomial_enumerate(const std::vector<double>& p) {
  const int K = static_cast<int>(p.size());
  std::vector<double> pmf(K + 1, 0.0);
  for (unsigned mask = 0; mask < (1u << K); ++mask) {
    double w = 1.0;
    for (int k = 0; k < K; ++k) w *= (mask >> k & 1u) ? p[k] : 1 - p[k];
    pmf[__builtin_popcount(mask)] += w;
  }
  return pmf;
}

/// Minimum mean |a_i - b_pi(i)| over all permutations (size <= 8).
inline double w1_bruteforce(const std::vector<cd>& a, const std::vector<cd>& b) {
  std::vector<int> perm(a.size());
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[perm[i]]);
    best = std::min(best, s);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return a.empty() ? 0.0 : best / a.size();
}

/// Roots of the characteristic polynomial of a small matrix: Faddeev-LeVerrier
/// coefficients, Durand-Kerner iteration, then Newton polish.
inline std::vector<cd> charpoly_roots(const Eigen::MatrixXcd& A) {
  const int n = static_cast<int>(A.rows());
  std::vector<cd> c(n + 1);  // monic: x^n + c[1] x^{n-1} + ... + c[n]
  c[0] = 1.0;
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(n, n);
  const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(n, n);
  for (int k = 1; k <= n; ++k) {
    M = A * M + c[k - 1] * I;
    c[k] = -(A * M).trace() / static_cast<double>(k);
  }
  auto poly = [&](cd x) {
    cd v = 0;
    for (int k = 0; k <= n; ++k) v = v * x + c[k];
    return v;
  };
  auto dpoly = [&](cd x) {
    cd v = 0;
    for (int k = 0; k < n; ++k) v = v * x + c[k] * static_cast<double>(n - k);
    return v;
  };
  std::vector<cd> z(n);
  for (int k = 0; k < n; ++k) z[k] = std::pow(cd(0.4, 0.9), k);
  for (int it = 0; it < 2000; ++it) {
    for (int k = 0; k < n; ++k) {
      cd den = 1.0;
      for (int j = 0; j < n; ++j)
        if (j != k) den *= z[k] - z[j];
      z[k] -= poly(z[k]) / den;
    }
  }
  for (auto& x : z)
    for (int it = 0; it < 5; ++it) {
      const cd d = dpoly(x);
      if (std::abs(d) > 0) x -= poly(x) / d;
    }
  return z;
}

/// Eigen's own complex eigensolver, as an external cross-check.
inline std::vector<cd> eigen_reference(const Eigen::MatrixXcd& A) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(A, false);
  std::vector<cd> out(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  return out;
}

/// Bottleneck matching distance: smallest max |a_i - b_pi(i)| over
/// permutations, by bisection over candidate thresholds.
inline double bottleneck_distance(const std::vector<cd>& a, const std::vector<cd>& b) {
  const std::size_t n = a.size();
  if (n != b.size()) return std::numeric_limits<double>::infinity();
  if (n == 0) return 0.0;
  std::vector<double> cands;
  for (const auto& x : a)
    for (const auto& y : b) cands.push_back(std::abs(x - y));
  std::sort(cands.begin(), cands.end());
  // Bipartite matching via augmenting paths for a given threshold.
  auto feasible = [&](double thr) {
    std::vector<int> match(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<char> seen(n, 0);
      std::function<bool(std::size_t)> aug = [&](std::size_t u) {
        for (std::size_t v = 0; v < n; ++v) {
          if (seen[v] || std::abs(a[u] - b[v]) > thr) continue;
          seen[v] = 1;
          if (match[v] < 0 || aug(match[v])) {
            match[v] = static_cast<int>(u);
            return true;
          }
        }
        return false;
      };
      if (!aug(i)) return false;
    }
    return true;
  };
  std::size_t lo = 0, hi = cands.size() - 1;
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (feasible(cands[mid])) hi = mid;
    else lo = mid + 1;
  }
  return cands[lo];
}

}  // namespace oracle
