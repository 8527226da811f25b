#include "ovkron/scalar_transforms.hpp"

#include <cmath>
#include <numbers>

#include "ovkron/parallel.hpp"

namespace ovkron {

namespace {

Complex cauchy_formula(const ScalarMeasure& mu, Complex zeta) {
  Complex s(0.0, 0.0);
  for (const auto& a : mu.atoms()) {
    Complex d = zeta - a.location;
    if (d == Complex(0.0, 0.0))
      throw DomainError("cauchy_of_measure: evaluation point hits an atom");
    s += a.weight / d;
  }
  if (mu.has_density()) {
    const RealVector& x = mu.density_grid();
    const RealVector& rho = mu.density_values();
    for (Eigen::Index i = 0; i + 1 < x.size(); ++i) {
      double h = x[i + 1] - x[i];
      s += 0.5 * h * (rho[i] / (zeta - x[i]) + rho[i + 1] / (zeta - x[i + 1]));
    }
  }
  return s;
}

}  // namespace

Complex cauchy_of_measure(const ScalarMeasure& mu, Complex zeta) {
  if (!(zeta.imag() > 0.0))
    throw DomainError("cauchy_of_measure: argument must have Im > 0");
  return cauchy_formula(mu, zeta);
}

Complex cauchy_of_measure_extended(const ScalarMeasure& mu, Complex zeta) {
  // The rational formula is its own analytic continuation off the support;
  // the reflection rule G(conj z) = conj(G(z)) is automatic for it.
  return cauchy_formula(mu, zeta);
}

Complex cauchy_mp(Complex zeta) {
  if (zeta.imag() < 0.0)
    throw DomainError("cauchy_mp: argument must have Im >= 0");
  if (zeta == Complex(0.0, 0.0))
    throw DomainError("cauchy_mp: transform diverges at 0");
  Complex s = std::sqrt((zeta - 2.0) * (zeta - 2.0) - 4.0);
  Complex g1 = (zeta - s) / (2.0 * zeta);
  Complex g2 = (zeta + s) / (2.0 * zeta);  // g1 + g2 = 1
  // Principal root, sign flipped so that Im(G) < 0; on the real axis off the
  // support both candidates are real and zeta*G -> 1 breaks the tie.
  if (g1.imag() < 0.0) return g1;
  if (g1.imag() > 0.0) return g2;
  return std::abs(zeta * g1 - 1.0) <= std::abs(zeta * g2 - 1.0) ? g1 : g2;
}

Complex cauchy_mp_extended(Complex zeta) {
  if (zeta.imag() < 0.0) return std::conj(cauchy_mp(std::conj(zeta)));
  return cauchy_mp(zeta);
}

Complex cauchy_mp_scaled(Complex zeta, double variance) {
  if (!(variance > 0.0))
    throw DomainError("cauchy_mp_scaled: variance must be positive");
  return cauchy_mp_extended(zeta / variance) / variance;
}

Complex measure_h_transform(const ScalarMeasure& mu, Complex b) {
  if (b == Complex(0.0, 0.0)) return Complex(mu.mean(), 0.0);
  Complex z = 1.0 / b;
  Complex num(0.0, 0.0);  // z G(z) - 1
  Complex den(0.0, 0.0);  // G(z)
  for (const auto& a : mu.atoms()) {
    Complex d = z - a.location;
    if (d == Complex(0.0, 0.0))
      throw DomainError("measure_h_transform: evaluation point hits an atom");
    num += a.weight * a.location / d;
    den += a.weight / d;
  }
  if (mu.has_density()) {
    const RealVector& x = mu.density_grid();
    const RealVector& rho = mu.density_values();
    for (Eigen::Index i = 0; i + 1 < x.size(); ++i) {
      double h = x[i + 1] - x[i];
      num += 0.5 * h *
             (x[i] * rho[i] / (z - x[i]) + x[i + 1] * rho[i + 1] / (z - x[i + 1]));
      den += 0.5 * h * (rho[i] / (z - x[i]) + rho[i + 1] / (z - x[i + 1]));
    }
  }
  if (den == Complex(0.0, 0.0))
    throw DomainError("measure_h_transform: transform vanished");
  return num / den;
}

DensityEstimate stieltjes_invert(const std::function<Complex(Complex)>& g,
                                 const RealVector& grid, double eta,
                                 int jobs) {
  if (!(eta > 0.0)) throw DomainError("stieltjes_invert: eta must be > 0");
  for (Eigen::Index i = 0; i + 1 < grid.size(); ++i)
    if (!(grid[i] < grid[i + 1]))
      throw DomainError("stieltjes_invert: grid must be strictly increasing");

  DensityEstimate out;
  out.grid = grid;
  out.values.resize(grid.size());
  out.eta = eta;

  std::vector<int> overshoot(static_cast<size_t>(grid.size()), 0);
  parallel_for(jobs, grid.size(), [&](std::int64_t k) {
    Complex value;
    try {
      value = g(Complex(grid[k], eta));
    } catch (const std::exception& e) {
      throw StieltjesError(grid[k], e.what());
    }
    double raw = -value.imag() / std::numbers::pi;
    if (raw < -1e-6) overshoot[static_cast<size_t>(k)] = 1;
    out.values[k] = std::max(0.0, raw);
  });
  for (int o : overshoot) out.negative_overshoots += o;

  double residual = 1.0 - out.trapezoid_mass();
  out.mass_at_zero = residual > 0.02 ? residual : 0.0;
  return out;
}

double default_eta(double grid_span, int points) {
  if (!(grid_span > 0.0) || points < 1)
    throw DomainError("default_eta: need positive span and points");
  return 1e-3 * grid_span / points;
}

}  // namespace ovkron
