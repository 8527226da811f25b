#pragma once

#include <functional>
#include <memory>
#include <unordered_map>
#include <vector>

#include "ovkron/measure.hpp"
#include "ovkron/scalar_transforms.hpp"

namespace ovkron {

/// Caller-owned scratch threaded through evaluations so that nested
/// fixed-point solvers can warm-start from their previous solution. Keyed by
/// the address of the evaluator node. One context per thread of evaluation.
struct EvalContext {
  std::unordered_map<const void*, ComplexVector> warm;
};

/// Runtime representation of an operator-valued Cauchy transform: an
/// evaluator from the upper matricial half-plane to the lower one.
///
/// A map may carry a dense evaluator, a diagonal fast path, or both. Maps
/// flagged `analytic_everywhere` are built from entrywise scalar formulas
/// whose natural domain is the whole plane minus the support; for the rest,
/// arguments in the lower half-plane are handled by the reflection rule
/// f(B) = f(B*)*.
class MatrixCauchyMap {
 public:
  using DenseEval =
      std::function<ComplexMatrix(const ComplexMatrix&, EvalContext*)>;
  using DiagEval =
      std::function<ComplexVector(const ComplexVector&, EvalContext*)>;

  static MatrixCauchyMap dense(Eigen::Index dim, DenseEval eval,
                               bool diagonal_preserving = false,
                               bool analytic_everywhere = false);
  static MatrixCauchyMap diagonal(Eigen::Index dim, DiagEval eval,
                                  bool analytic_everywhere = false);
  static MatrixCauchyMap dense_and_diagonal(Eigen::Index dim, DenseEval dense,
                                            DiagEval diag,
                                            bool analytic_everywhere = false);
  /// 1x1 map from an extended scalar transform.
  static MatrixCauchyMap from_scalar(std::function<Complex(Complex)> g);

  Eigen::Index dim() const noexcept { return dim_; }
  bool diagonal_preserving() const noexcept { return diagonal_preserving_; }
  bool has_diagonal_path() const noexcept { return static_cast<bool>(diag_); }
  bool analytic_everywhere() const noexcept { return analytic_everywhere_; }

  /// Strict evaluation: requires B in the upper half-plane.
  ComplexMatrix operator()(const ComplexMatrix& b,
                           EvalContext* ctx = nullptr) const;
  ComplexVector eval_diag(const ComplexVector& b,
                          EvalContext* ctx = nullptr) const;

  /// Evaluation extended to the lower half-plane by reflection (and to
  /// arbitrary off-real diagonals for entrywise-analytic maps).
  ComplexMatrix eval_extended(const ComplexMatrix& b,
                              EvalContext* ctx = nullptr) const;
  ComplexVector eval_diag_extended(const ComplexVector& b,
                                   EvalContext* ctx = nullptr) const;

  /// Stable identity for warm-start keys.
  const void* node_id() const noexcept { return id_.get(); }

  /// Optional native h-transform b^{-1} - G(b^{-1})^{-1} in a
  /// cancellation-free form; solvers prefer it when present.
  MatrixCauchyMap&& with_native_h(DiagEval h) && {
    h_diag_ = std::move(h);
    return std::move(*this);
  }
  bool has_native_h() const noexcept { return static_cast<bool>(h_diag_); }
  ComplexVector eval_h_diag(const ComplexVector& b,
                            EvalContext* ctx = nullptr) const {
    return h_diag_(b, ctx);
  }

 private:
  MatrixCauchyMap() = default;
  Eigen::Index dim_ = 0;
  bool diagonal_preserving_ = false;
  bool analytic_everywhere_ = false;
  DenseEval dense_;
  DiagEval diag_;
  DiagEval h_diag_;
  std::shared_ptr<int> id_ = std::make_shared<int>(0);
};

/// Reflection rule for arguments in the lower half-plane: (G(B*))*.
ComplexMatrix extend_reflect(const MatrixCauchyMap& g, const ComplexMatrix& b,
                             EvalContext* ctx = nullptr);

/// Transform of r E_{k,k} over the 2n x 2n algebra:
///   B^{-1} + [B^{-1}]_kk^{-2} (G_mu([B^{-1}]_kk^{-1}) - [B^{-1}]_kk)
///            B^{-1} E_{k,k} B^{-1}.
/// k is a 0-based index in [0, 2n).
ComplexMatrix cauchy_r_times_unit(const ScalarMeasure& mu, Eigen::Index k,
                                  Eigen::Index n, const ComplexMatrix& b);
MatrixCauchyMap unit_coordinate_map(ScalarMeasure mu, Eigen::Index k,
                                    Eigen::Index n);

/// Transform of the correlation corner Q = sum r_k^2 E_kk + sum t_k^2 E_..
/// at a diagonal argument: diag(G_{r_1^2}(d_1), ..., G_{t_n^2}(d_2n)).
ComplexVector cauchy_q_diagonal(const std::vector<ScalarMeasure>& r2,
                                const std::vector<ScalarMeasure>& t2,
                                const ComplexVector& d);
ComplexMatrix cauchy_q_diagonal(const std::vector<ScalarMeasure>& r2,
                                const std::vector<ScalarMeasure>& t2,
                                const ComplexMatrix& d);
MatrixCauchyMap correlation_corner_map(std::vector<ScalarMeasure> r2,
                                       std::vector<ScalarMeasure> t2);

/// Transform of one hermitized circular block [[0, M x], [M* x*, 0]] with
/// M = diag(d) P at a diagonal argument J = diag(J1, J2). The permutation is
/// given as pi with M_{i, pi(i)} = d_i (0-based). Unit circular variance;
/// scale by folding it into d. Zero entries of d take the analytic limit
/// (the free resolvent 1/[J]).
ComplexVector cauchy_xhat_kl(const RealVector& d,
                             const std::vector<Eigen::Index>& pi,
                             const ComplexVector& j);
MatrixCauchyMap circular_block_map(RealVector d, std::vector<Eigen::Index> pi);

/// r-transform G(B)^{-1} - B. Requires B in H+ and G(B) invertible.
ComplexMatrix r_transform(const MatrixCauchyMap& g, const ComplexMatrix& b,
                          EvalContext* ctx = nullptr);

/// h-transform B^{-1} - G(B^{-1})^{-1}; the inner evaluation happens in the
/// lower half-plane and uses the extended evaluator.
ComplexMatrix h_transform(const MatrixCauchyMap& g, const ComplexMatrix& b,
                          EvalContext* ctx = nullptr);

/// Zero noncommutative variable: G(B) = B^{-1}.
MatrixCauchyMap zero_variable_map(Eigen::Index dim);

/// Deterministic diagonal variable c: G(B) = (B - diag(c))^{-1}.
MatrixCauchyMap deterministic_diagonal_map(ComplexVector c);

std::vector<Eigen::Index> identity_permutation(Eigen::Index n);
std::vector<Eigen::Index> inverse_permutation(const std::vector<Eigen::Index>& pi);

}  // namespace ovkron
