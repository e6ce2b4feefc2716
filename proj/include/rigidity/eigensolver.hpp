#pragma once

#include <vector>

#include "rigidity/ensemble.hpp"

namespace rigidity {

/// Eigenvalues of a square matrix together with the worst normalized
/// residual max ||A v - lambda v|| / ||A||_F over the computed pairs.
struct EigenvalueSet {
  std::vector<Complex> values;
  double residual_bound = 0.0;
};

inline constexpr double kDefaultEigenTolerance = 1e-10;

/// All eigenvalues of a general complex matrix: Householder reduction to
/// Hessenberg form, then single-shift QR with Wilkinson shifts and deflation.
/// Throws NumericalError after 30 * dim iterations without convergence, or when
/// the residual bound exceeds `tol`; std::invalid_argument on non-square or
/// non-finite input.
EigenvalueSet general_eigenvalues(const ComplexMatrix& a, double tol = kDefaultEigenTolerance);

/// Real eigenvalues (ascending, imaginary parts zero) of a Hermitian matrix,
/// by cyclic complex Jacobi rotations. Input must satisfy
/// max |H - H^H| <= 1e-12.
EigenvalueSet hermitian_eigenvalues(const ComplexMatrix& h, double tol = kDefaultEigenTolerance);

std::vector<double> real_parts(const EigenvalueSet& set);

namespace detail {

/// A = Z T Z^H with Z unitary and T upper triangular.
struct SchurForm {
  ComplexMatrix t;
  ComplexMatrix z;
};

void reduce_to_hessenberg(ComplexMatrix& h, ComplexMatrix& z);
SchurForm complex_schur(const ComplexMatrix& a);

/// Eigenvectors of A recovered from its Schur form, one unit column per
/// diagonal entry of T.
ComplexMatrix schur_eigenvectors(const SchurForm& schur);

}  // namespace detail

}  // namespace rigidity
