#pragma once

#include <functional>
#include <string>

#include "ovkron/opval.hpp"

namespace ovkron {

struct SolveReport {
  std::string kind;  // "additive" or "multiplicative"
  int iterations = 0;
  double residual = 0.0;  // ||f(w) - w||_max / max(1, ||w||_max)
  bool converged = false;
  double damping_initial = 1.0;
  double damping_final = 1.0;
  int damping_halvings = 0;
  std::string note;

  /// Machine-readable key=value line for diagnostic logs.
  std::string to_log_line() const;
};

class NonConvergenceError : public Error {
 public:
  explicit NonConvergenceError(SolveReport report)
      : Error("fixed point did not converge after " +
              std::to_string(report.iterations) +
              " iterations, residual " + std::to_string(report.residual)),
        report_(std::move(report)) {}
  const SolveReport& report() const noexcept { return report_; }

 private:
  SolveReport report_;
};

class HalfPlaneViolationError : public Error {
 public:
  using Error::Error;
};

struct FixedPointConfig {
  double tolerance = 1e-12;
  int max_iterations = 10000;
  double damping = 1.0;  // auto-halved on detected oscillation
  std::function<void(const SolveReport&)> logger;

  void validate() const;
};

struct AdditiveResult {
  ComplexMatrix omega1;
  ComplexMatrix g_sum;
  SolveReport report;
};

struct AdditiveDiagResult {
  ComplexVector omega1;
  ComplexVector g_sum;
  SolveReport report;
};

/// Additive free convolution over the matrix algebra: iterates
/// f_B(W) = r_Y(r_X(W) + B) + B from W = B until the fixed point omega_1,
/// then G_{X+Y}(B) = G_X(omega_1). Requires B in H+.
AdditiveResult additive_subordinator(const MatrixCauchyMap& g_x,
                                     const MatrixCauchyMap& g_y,
                                     const ComplexMatrix& b,
                                     const FixedPointConfig& cfg,
                                     EvalContext* ctx = nullptr);

/// Diagonal fast path (both transforms must expose diagonal evaluation).
/// `initial` optionally warm-starts the iteration.
AdditiveDiagResult additive_subordinator_diag(
    const MatrixCauchyMap& g_x, const MatrixCauchyMap& g_y,
    const ComplexVector& b, const FixedPointConfig& cfg,
    EvalContext* ctx = nullptr, const ComplexVector* initial = nullptr);

struct MultiplicativeResult {
  ComplexMatrix g;       // G_{XY}(zeta I)
  ComplexMatrix omega2;  // subordinator at the reflected base point, in H+
  SolveReport report;
};

struct MultiplicativeDiagResult {
  ComplexVector g;
  ComplexVector omega2;
  SolveReport report;
};

/// Multiplicative free convolution at a scalar matrix argument: X positive,
/// iterates g_B(W) = B h_X(h_Y(W) B) at the base point tied to zeta and
/// assembles G_{XY}(zeta I) from the subordinator and h_Y. The base point
/// zeta^{-1} I lies in H-, so the solve runs at the conjugate point and the
/// result is reflected back. Requires Im(zeta) > 0.
MultiplicativeResult multiplicative_subordinator(
    const MatrixCauchyMap& g_x, const MatrixCauchyMap& g_y, Complex zeta,
    const FixedPointConfig& cfg, EvalContext* ctx = nullptr,
    const ComplexVector* initial = nullptr);

MultiplicativeDiagResult multiplicative_subordinator_diag(
    const MatrixCauchyMap& g_x, const MatrixCauchyMap& g_y, Complex zeta,
    const FixedPointConfig& cfg, EvalContext* ctx = nullptr,
    const ComplexVector* initial = nullptr);

/// Transform of the free sum X + Y as a lazy evaluator; each evaluation runs
/// the additive fixed point. Warm starts are cached per EvalContext.
MatrixCauchyMap free_additive_convolution(MatrixCauchyMap g_x,
                                          MatrixCauchyMap g_y,
                                          FixedPointConfig cfg);

}  // namespace ovkron
