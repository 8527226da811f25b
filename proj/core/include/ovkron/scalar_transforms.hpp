#pragma once

#include <functional>

#include "ovkron/measure.hpp"

namespace ovkron {

/// Wraps a failure of the evaluator passed to stieltjes_invert with the
/// offending grid location.
class StieltjesError : public Error {
 public:
  StieltjesError(double xi, const std::string& what)
      : Error("stieltjes inversion failed at xi=" + std::to_string(xi) + ": " +
              what),
        xi_(xi) {}
  double xi() const noexcept { return xi_; }

 private:
  double xi_;
};

/// Cauchy transform of a measure at a point of the open upper half-plane.
/// Throws DomainError when Im(zeta) <= 0.
Complex cauchy_of_measure(const ScalarMeasure& mu, Complex zeta);

/// Analytic continuation of cauchy_of_measure to C minus the support:
/// direct formula above and below the axis, boundary values from the upper
/// half-plane on the real axis.
Complex cauchy_of_measure_extended(const ScalarMeasure& mu, Complex zeta);

/// Cauchy transform of the unit-rate Marchenko-Pastur law on [0, 4],
/// (zeta - sqrt((zeta-2)^2 - 4)) / (2 zeta). Accepts Im(zeta) >= 0; real
/// arguments are treated as boundary limits from the upper half-plane.
/// Throws DomainError when Im(zeta) < 0.
Complex cauchy_mp(Complex zeta);

/// cauchy_mp continued to the whole plane minus [0, 4] via the reflection
/// rule G(conj(zeta)) = conj(G(zeta)).
Complex cauchy_mp_extended(Complex zeta);

/// Transform of the Marchenko-Pastur law dilated by `variance`:
/// (1/variance) * G((zeta)/variance), extended domain.
Complex cauchy_mp_scaled(Complex zeta, double variance);

/// Scalar h-transform of a measure, b^{-1} - G_mu(b^{-1})^{-1}, computed in
/// the cancellation-free form (z G(z) - 1)/G(z) with
/// z G(z) - 1 = sum w_m a_m/(z - a_m) + integral x rho(x)/(z - x) dx at
/// z = 1/b. b = 0 returns the analytic limit, the mean of the measure.
Complex measure_h_transform(const ScalarMeasure& mu, Complex b);

/// Stieltjes inversion on a grid: values[k] = max(0, -Im G(x_k + i eta)/pi).
/// The residual 1 - trapezoid mass is reported as mass_at_zero when it
/// exceeds 0.02. Grid points may be evaluated on `jobs` threads; the
/// evaluator must then be safe to call concurrently.
DensityEstimate stieltjes_invert(const std::function<Complex(Complex)>& g,
                                 const RealVector& grid, double eta,
                                 int jobs = 1);

/// Default smoothing offset: 1e-3 * span / points.
double default_eta(double grid_span, int points);

}  // namespace ovkron
