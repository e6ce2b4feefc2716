#include "rigidity/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace rigidity {

namespace {

constexpr double kDeflation = 1e-14;
constexpr double kEps = std::numeric_limits<double>::epsilon();

void require_square_finite(const ComplexMatrix& a, const char* who) {
  if (a.rows() != a.cols()) throw std::invalid_argument(std::string(who) + ": matrix is not square");
  if (!a.allFinite()) throw std::invalid_argument(std::string(who) + ": matrix has non-finite entries");
}

// Unitary 2x2 rotation G = [[c, s], [-conj(s), c]] with G [a; b] = [r; 0].
struct Givens {
  double c;
  Complex s;

  static Givens annihilate(Complex a, Complex b) {
    const double ab = std::abs(b);
    if (ab == 0.0) return {1.0, Complex(0.0, 0.0)};
    const double aa = std::abs(a);
    const double norm = std::hypot(aa, ab);
    if (aa == 0.0) return {0.0, std::conj(b) / ab};
    return {aa / norm, (a / aa) * std::conj(b) / norm};
  }

  // rows i, i+1 of m, columns [c0, c1)
  void apply_left(ComplexMatrix& m, int i, int c0, int c1) const {
    for (int k = c0; k < c1; ++k) {
      const Complex x = m(i, k);
      const Complex y = m(i + 1, k);
      m(i, k) = c * x + s * y;
      m(i + 1, k) = -std::conj(s) * x + c * y;
    }
  }

  // M <- M G^H on columns i, i+1, rows [r0, r1)
  void apply_right_adjoint(ComplexMatrix& m, int i, int r0, int r1) const {
    for (int k = r0; k < r1; ++k) {
      const Complex x = m(k, i);
      const Complex y = m(k, i + 1);
      m(k, i) = x * c + y * std::conj(s);
      m(k, i + 1) = -x * s + y * c;
    }
  }
};

bool negligible_subdiagonal(const ComplexMatrix& h, int i, double scale) {
  const double sub = std::abs(h(i, i - 1));
  double ref = std::abs(h(i - 1, i - 1)) + std::abs(h(i, i));
  if (ref == 0.0) ref = scale;
  return sub <= kDeflation * ref || sub <= std::numeric_limits<double>::min();
}

// Eigenvalue of the trailing 2x2 block of the active window closest to h(iu, iu).
Complex wilkinson_shift(const ComplexMatrix& h, int iu, int iter) {
  if (iter % 10 == 0) {
    // Exceptional shift to break cycles.
    const double x = std::abs(h(iu, iu - 1).real()) + (iu >= 2 ? std::abs(h(iu - 1, iu - 2).real()) : 0.0);
    return h(iu, iu) + x;
  }
  const Complex a = h(iu - 1, iu - 1);
  const Complex b = h(iu - 1, iu);
  const Complex c = h(iu, iu - 1);
  const Complex d = h(iu, iu);
  const double norm = std::abs(a) + std::abs(b) + std::abs(c) + std::abs(d);
  if (norm == 0.0) return d;
  const Complex half_diff = (a - d) / (2.0 * norm);
  const Complex disc = std::sqrt(half_diff * half_diff + (b / norm) * (c / norm));
  const Complex mid = (a + d) / (2.0 * norm);
  const Complex l1 = (mid + disc) * norm;
  const Complex l2 = (mid - disc) * norm;
  return std::abs(l1 - d) <= std::abs(l2 - d) ? l1 : l2;
}

}  // namespace

namespace detail {

void reduce_to_hessenberg(ComplexMatrix& h, ComplexMatrix& z) {
  const int n = static_cast<int>(h.rows());
  for (int k = 0; k + 2 < n; ++k) {
    const int len = n - k - 1;
    ComplexVector v = h.col(k).tail(len);
    const double norm = v.norm();
    if (norm == 0.0) continue;
    const Complex x0 = v(0);
    const Complex unit = std::abs(x0) > 0.0 ? x0 / std::abs(x0) : Complex(1.0, 0.0);
    v(0) += unit * norm;
    const double vnorm2 = v.squaredNorm();
    const double beta = 2.0 / vnorm2;
    // H <- P H
    for (int c = 0; c < n; ++c) {
      auto col = h.col(c).tail(len);
      const Complex w = v.dot(col);
      col -= beta * w * v;
    }
    // H <- H P, Z <- Z P
    for (int r = 0; r < n; ++r) {
      auto row_h = h.row(r).tail(len);
      const Complex wh = (row_h * v)(0);
      row_h -= beta * wh * v.adjoint();
      auto row_z = z.row(r).tail(len);
      const Complex wz = (row_z * v)(0);
      row_z -= beta * wz * v.adjoint();
    }
    h.col(k).tail(len - 1).setZero();
  }
}

SchurForm complex_schur(const ComplexMatrix& a) {
  require_square_finite(a, "complex_schur");
  const int n = static_cast<int>(a.rows());
  SchurForm out{a, ComplexMatrix::Identity(n, n)};
  if (n == 0) return out;
  ComplexMatrix& h = out.t;
  ComplexMatrix& z = out.z;
  reduce_to_hessenberg(h, z);
  const double scale = std::max(h.norm(), std::numeric_limits<double>::min());

  const long budget = 30L * n;
  long total = 0;
  int iter = 0;
  int iu = n - 1;
  while (true) {
    while (iu > 0 && negligible_subdiagonal(h, iu, scale)) {
      h(iu, iu - 1) = 0.0;
      --iu;
      iter = 0;
    }
    if (iu == 0) break;

    int il = iu - 1;
    while (il > 0 && !negligible_subdiagonal(h, il, scale)) --il;
    if (il > 0) h(il, il - 1) = 0.0;

    ++iter;
    if (++total > budget) {
      throw NumericalError("complex QR did not converge within " + std::to_string(budget) +
                           " iterations; stuck deflation window [" + std::to_string(il) + ", " +
                           std::to_string(iu) + "]");
    }

    const Complex shift = wilkinson_shift(h, iu, iter);
    Givens g = Givens::annihilate(h(il, il) - shift, h(il + 1, il));
    g.apply_left(h, il, il, n);
    g.apply_right_adjoint(h, il, 0, std::min(il + 2, iu) + 1);
    g.apply_right_adjoint(z, il, 0, n);

    for (int i = il + 1; i < iu; ++i) {
      g = Givens::annihilate(h(i, i - 1), h(i + 1, i - 1));
      g.apply_left(h, i, i - 1, n);
      h(i + 1, i - 1) = 0.0;
      g.apply_right_adjoint(h, i, 0, std::min(i + 2, iu) + 1);
      g.apply_right_adjoint(z, i, 0, n);
    }
  }
  for (int c = 0; c < n; ++c)
    for (int r = c + 1; r < n; ++r) h(r, c) = 0.0;
  return out;
}

ComplexMatrix schur_eigenvectors(const SchurForm& schur) {
  const ComplexMatrix& t = schur.t;
  const int n = static_cast<int>(t.rows());
  const double smin = std::max(kEps * t.norm(), std::numeric_limits<double>::min());
  ComplexMatrix vectors(n, n);
  for (int k = 0; k < n; ++k) {
    const Complex lambda = t(k, k);
    ComplexVector y = ComplexVector::Zero(n);
    y(k) = 1.0;
    for (int j = k - 1; j >= 0; --j) {
      Complex acc = 0.0;
      for (int l = j + 1; l <= k; ++l) acc += t(j, l) * y(l);
      Complex denom = t(j, j) - lambda;
      if (std::abs(denom) < smin) denom = smin;
      y(j) = -acc / denom;
      const double mag = y.cwiseAbs().maxCoeff();
      if (mag > 1e100) y /= mag;
    }
    ComplexVector v = schur.z * y;
    vectors.col(k) = v / v.norm();
  }
  return vectors;
}

}  // namespace detail

EigenvalueSet general_eigenvalues(const ComplexMatrix& a, double tol) {
  require_square_finite(a, "general_eigenvalues");
  const auto schur = detail::complex_schur(a);
  const int n = static_cast<int>(a.rows());
  EigenvalueSet out;
  out.values.reserve(n);
  for (int k = 0; k < n; ++k) out.values.push_back(schur.t(k, k));

  const double anorm = a.norm();
  if (n > 0 && anorm > 0.0) {
    const ComplexMatrix v = detail::schur_eigenvectors(schur);
    for (int k = 0; k < n; ++k) {
      const double r = (a * v.col(k) - out.values[k] * v.col(k)).norm() / anorm;
      out.residual_bound = std::max(out.residual_bound, r);
    }
  }
  if (!(out.residual_bound <= tol)) {
    throw NumericalError("general_eigenvalues: residual " + std::to_string(out.residual_bound) +
                         " exceeds tolerance " + std::to_string(tol));
  }
  return out;
}

EigenvalueSet hermitian_eigenvalues(const ComplexMatrix& h, double tol) {
  require_square_finite(h, "hermitian_eigenvalues");
  const int n = static_cast<int>(h.rows());
  if (n > 0 && (h - h.adjoint()).cwiseAbs().maxCoeff() > 1e-12) {
    throw std::invalid_argument("hermitian_eigenvalues: matrix is not Hermitian within 1e-12");
  }
  ComplexMatrix a = 0.5 * (h + h.adjoint());
  ComplexMatrix v = ComplexMatrix::Identity(n, n);
  const double fro = std::max(a.norm(), std::numeric_limits<double>::min());

  auto off_norm = [&] {
    double s = 0.0;
    for (int q = 0; q < n; ++q)
      for (int p = 0; p < q; ++p) s += std::norm(a(p, q));
    return std::sqrt(2.0 * s);
  };

  constexpr int kMaxSweeps = 100;
  int sweep = 0;
  for (; sweep < kMaxSweeps && off_norm() > kEps * fro; ++sweep) {
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double mag = std::abs(a(p, q));
        if (mag <= std::numeric_limits<double>::min()) continue;
        const Complex phase = a(p, q) / mag;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double tau = (aqq - app) / (2.0 * mag);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // W = diag(1, conj(phase)) * [[c, s], [-s, c]] on the (p, q) plane.
        const Complex w_pp = c;
        const Complex w_pq = s;
        const Complex w_qp = -s * std::conj(phase);
        const Complex w_qq = c * std::conj(phase);
        for (int k = 0; k < n; ++k) {
          const Complex x = a(k, p);
          const Complex y = a(k, q);
          a(k, p) = x * w_pp + y * w_qp;
          a(k, q) = x * w_pq + y * w_qq;
          const Complex vx = v(k, p);
          const Complex vy = v(k, q);
          v(k, p) = vx * w_pp + vy * w_qp;
          v(k, q) = vx * w_pq + vy * w_qq;
        }
        for (int k = 0; k < n; ++k) {
          const Complex x = a(p, k);
          const Complex y = a(q, k);
          a(p, k) = std::conj(w_pp) * x + std::conj(w_qp) * y;
          a(q, k) = std::conj(w_pq) * x + std::conj(w_qq) * y;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
      }
    }
  }
  if (off_norm() > 1e3 * kEps * fro) {
    throw NumericalError("hermitian_eigenvalues: Jacobi sweeps did not converge");
  }

  std::vector<int> order(n);
  for (int k = 0; k < n; ++k) order[k] = k;
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return a(x, x).real() < a(y, y).real(); });

  EigenvalueSet out;
  out.values.reserve(n);
  const double hnorm = h.norm();
  for (int k : order) {
    const double lambda = a(k, k).real();
    out.values.emplace_back(lambda, 0.0);
    if (hnorm > 0.0) {
      const double r = (h * v.col(k) - lambda * v.col(k)).norm() / hnorm;
      out.residual_bound = std::max(out.residual_bound, r);
    }
  }
  if (!(out.residual_bound <= tol)) {
    throw NumericalError("hermitian_eigenvalues: residual " + std::to_string(out.residual_bound) +
                         " exceeds tolerance " + std::to_string(tol));
  }
  return out;
}

std::vector<double> real_parts(const EigenvalueSet& set) {
  std::vector<double> out;
  out.reserve(set.values.size());
  for (const auto& z : set.values) out.push_back(z.real());
  return out;
}

}  // namespace rigidity
