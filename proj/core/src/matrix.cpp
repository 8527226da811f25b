#include "ovkron/matrix.hpp"

#include <algorithm>
#include <cmath>

namespace ovkron {

const Tolerances& Tolerances::global() {
  static const Tolerances tol{};
  return tol;
}

double max_abs(const ComplexMatrix& a) {
  if (a.size() == 0) return 0.0;
  return a.cwiseAbs().maxCoeff();
}

bool is_hermitian(const ComplexMatrix& a, const Tolerances& tol) {
  if (a.rows() != a.cols()) return false;
  double dev = max_abs(a - a.adjoint());
  return dev <= tol.hermitian_rel * (1.0 + max_abs(a));
}

bool is_diagonal(const ComplexMatrix& a, const Tolerances& tol) {
  if (a.rows() != a.cols()) return false;
  ComplexMatrix off = a;
  off.diagonal().setZero();
  return max_abs(off) <= tol.diagonal_rel * (1.0 + max_abs(a));
}

ComplexMatrix inverse(const ComplexMatrix& a, const Tolerances& tol) {
  if (a.rows() != a.cols() || a.rows() < 1)
    throw DomainError("inverse: matrix must be square and nonempty");
  Eigen::PartialPivLU<ComplexMatrix> lu(a);
  double rc = lu.rcond();
  double cond = rc > 0 ? 1.0 / rc : std::numeric_limits<double>::infinity();
  if (!(cond < tol.max_condition)) throw SingularMatrixError(cond);
  ComplexMatrix m = lu.inverse();
  double residual = max_abs(a * m - ComplexMatrix::Identity(a.rows(), a.cols()));
  if (residual > tol.inverse_residual * static_cast<double>(a.rows()))
    throw SingularMatrixError(cond);
  return m;
}

double half_plane_margin(const ComplexMatrix& b) {
  if (b.rows() != b.cols() || b.rows() < 1)
    throw DomainError("half_plane_margin: matrix must be square and nonempty");
  ComplexMatrix im = (b - b.adjoint()) / Complex(0.0, 2.0);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(im,
                                                  Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

bool in_upper_half_plane(const ComplexMatrix& b, const Tolerances& tol) {
  double scale = std::max(1.0, max_abs(b));
  return half_plane_margin(b) > tol.half_plane * scale;
}

Complex normalized_trace(const ComplexMatrix& a) {
  if (a.rows() != a.cols() || a.rows() < 1)
    throw DomainError("normalized_trace: matrix must be square and nonempty");
  return a.trace() / static_cast<double>(a.rows());
}

RealVector hermitian_eigenvalues(const ComplexMatrix& a,
                                 const Tolerances& tol) {
  if (a.rows() != a.cols() || a.rows() < 1)
    throw DomainError("hermitian_eigenvalues: matrix must be square");
  double dev = max_abs(a - a.adjoint());
  if (dev > tol.hermitian_rel * (1.0 + max_abs(a)))
    throw NonHermitianError(dev);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(
      ComplexMatrix(0.5 * (a + a.adjoint())), Eigen::EigenvaluesOnly);
  RealVector ev = es.eigenvalues();
  return ev.reverse();
}

RealVector singular_values(const ComplexMatrix& a) {
  ComplexMatrix gram = a.adjoint() * a;
  RealVector ev = hermitian_eigenvalues(gram);
  return ev.cwiseMax(0.0).cwiseSqrt();
}

}  // namespace ovkron
