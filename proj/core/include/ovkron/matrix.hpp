#pragma once

#include <Eigen/Dense>
#include <complex>

#include "ovkron/errors.hpp"

namespace ovkron {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Numerical tolerances shared across modules. Tests construct tightened
/// copies; library entry points default to global().
struct Tolerances {
  double hermitian_rel = 1e-12;   // Hermitian deviation, relative to scale
  double half_plane = 1e-14;      // eigenvalue margin for half-plane tests
  double max_condition = 1e14;    // inverse() rejects beyond this
  double inverse_residual = 1e-10;  // ||A*inv(A) - I||_max per dimension
  double diagonal_rel = 1e-12;    // off-diagonal magnitude for diagonal tests

  static const Tolerances& global();
};

double max_abs(const ComplexMatrix& a);

bool is_hermitian(const ComplexMatrix& a,
                  const Tolerances& tol = Tolerances::global());

bool is_diagonal(const ComplexMatrix& a,
                 const Tolerances& tol = Tolerances::global());

/// Inverse of a square matrix. Throws SingularMatrixError carrying the
/// condition estimate when the matrix is numerically singular or the
/// multiply-back residual exceeds tolerance.
ComplexMatrix inverse(const ComplexMatrix& a,
                      const Tolerances& tol = Tolerances::global());

/// Smallest eigenvalue of (B - B*)/(2i). Positive means B is in the upper
/// matricial half-plane; the signed value doubles as a diagnostic margin.
double half_plane_margin(const ComplexMatrix& b);

bool in_upper_half_plane(const ComplexMatrix& b,
                         const Tolerances& tol = Tolerances::global());

inline bool in_lower_half_plane(const ComplexMatrix& b,
                                const Tolerances& tol = Tolerances::global()) {
  return in_upper_half_plane(-b, tol);
}

/// (1/dim) * sum of diagonal entries.
Complex normalized_trace(const ComplexMatrix& a);

/// Eigenvalues of a Hermitian matrix, sorted non-increasing. Throws
/// NonHermitianError when the input is not Hermitian within tolerance.
RealVector hermitian_eigenvalues(const ComplexMatrix& a,
                                 const Tolerances& tol = Tolerances::global());

/// Singular values, non-increasing, computed as square roots of the
/// Hermitian eigenvalues of A*A.
RealVector singular_values(const ComplexMatrix& a);

}  // namespace ovkron
