#pragma once

#include <vector>

#include "ovkron/matrix.hpp"

namespace ovkron {

/// Compactly supported probability measure on the reals: a finite list of
/// atoms plus an optional absolutely continuous part sampled on a grid
/// (trapezoid quadrature). Total mass must be 1 within 1e-6.
class ScalarMeasure {
 public:
  struct Atom {
    double location;
    double weight;
  };

  static ScalarMeasure dirac(double location) {
    return from_atoms({Atom{location, 1.0}});
  }
  static ScalarMeasure from_atoms(std::vector<Atom> atoms);
  static ScalarMeasure atoms_and_density(std::vector<Atom> atoms,
                                         RealVector grid, RealVector density);

  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  bool has_density() const noexcept { return grid_.size() > 0; }
  const RealVector& density_grid() const noexcept { return grid_; }
  const RealVector& density_values() const noexcept { return density_; }

  double total_mass() const;
  double mean() const;
  double second_moment() const;
  double support_min() const;
  double support_max() const;

  /// True iff the measure is a single atom at the given location.
  bool is_dirac_at(double location, double tol = 0.0) const;

  bool operator==(const ScalarMeasure& other) const;

 private:
  ScalarMeasure() = default;
  std::vector<Atom> atoms_;
  RealVector grid_;     // strictly increasing when present
  RealVector density_;  // nonnegative, same size as grid_
};

/// Gridded estimate of a spectral density obtained by Stieltjes inversion.
/// `mass_at_zero` carries any atom at the origin that the grid cannot see.
struct DensityEstimate {
  RealVector grid;    // strictly increasing
  RealVector values;  // nonnegative
  double eta = 0.0;
  double mass_at_zero = 0.0;
  /// Grid points whose raw inverted value fell below -1e-6 before clamping;
  /// nonzero counts indicate a branch or convergence problem upstream.
  int negative_overshoots = 0;

  double trapezoid_mass() const;
  double total_mass() const { return trapezoid_mass() + mass_at_zero; }
  /// mass_at_zero plus the integral of the density up to x (linear interp).
  double cdf(double x) const;
};

/// Quantile discretization of Uniform[0,1]: atoms at (k - 1/2)/n_atoms with
/// equal weights. Requires n_atoms >= 2.
ScalarMeasure discretize_uniform01(int n_atoms);

/// Pushforward of a purely atomic measure under s -> s^2 (law of the square
/// of a variable with the given law).
ScalarMeasure pushforward_square(const ScalarMeasure& mu);

}  // namespace ovkron
