#include "ovkron/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace ovkron {

namespace {

constexpr double kMassTolerance = 1e-6;

double trapz(const RealVector& x, const RealVector& y) {
  double s = 0.0;
  for (Eigen::Index i = 0; i + 1 < x.size(); ++i)
    s += 0.5 * (y[i] + y[i + 1]) * (x[i + 1] - x[i]);
  return s;
}

}  // namespace

ScalarMeasure ScalarMeasure::from_atoms(std::vector<Atom> atoms) {
  return atoms_and_density(std::move(atoms), RealVector(), RealVector());
}

ScalarMeasure ScalarMeasure::atoms_and_density(std::vector<Atom> atoms,
                                               RealVector grid,
                                               RealVector density) {
  ScalarMeasure m;
  for (const auto& a : atoms) {
    if (!(a.weight > 0.0) || a.weight > 1.0 + kMassTolerance)
      throw DomainError("ScalarMeasure: atom weights must lie in (0, 1]");
    if (!std::isfinite(a.location))
      throw DomainError("ScalarMeasure: atom locations must be finite");
  }
  if (grid.size() != density.size())
    throw DomainError("ScalarMeasure: density grid/value size mismatch");
  if (grid.size() == 1)
    throw DomainError("ScalarMeasure: density part needs at least two points");
  for (Eigen::Index i = 0; i + 1 < grid.size(); ++i)
    if (!(grid[i] < grid[i + 1]))
      throw DomainError("ScalarMeasure: density grid must be increasing");
  if (density.size() > 0 && density.minCoeff() < 0.0)
    throw DomainError("ScalarMeasure: density values must be nonnegative");

  std::sort(atoms.begin(), atoms.end(),
            [](const Atom& a, const Atom& b) { return a.location < b.location; });
  m.atoms_ = std::move(atoms);
  m.grid_ = std::move(grid);
  m.density_ = std::move(density);

  double mass = m.total_mass();
  if (std::abs(mass - 1.0) > kMassTolerance)
    throw DomainError("ScalarMeasure: total mass " + std::to_string(mass) +
                      " not within 1e-6 of 1");
  return m;
}

double ScalarMeasure::total_mass() const {
  double s = 0.0;
  for (const auto& a : atoms_) s += a.weight;
  if (has_density()) s += trapz(grid_, density_);
  return s;
}

double ScalarMeasure::mean() const {
  double s = 0.0;
  for (const auto& a : atoms_) s += a.weight * a.location;
  if (has_density()) s += trapz(grid_, (grid_.array() * density_.array()).matrix());
  return s;
}

double ScalarMeasure::second_moment() const {
  double s = 0.0;
  for (const auto& a : atoms_) s += a.weight * a.location * a.location;
  if (has_density())
    s += trapz(grid_, (grid_.array().square() * density_.array()).matrix());
  return s;
}

double ScalarMeasure::support_min() const {
  double lo = std::numeric_limits<double>::infinity();
  for (const auto& a : atoms_) lo = std::min(lo, a.location);
  if (has_density()) lo = std::min(lo, grid_[0]);
  return lo;
}

double ScalarMeasure::support_max() const {
  double hi = -std::numeric_limits<double>::infinity();
  for (const auto& a : atoms_) hi = std::max(hi, a.location);
  if (has_density()) hi = std::max(hi, grid_[grid_.size() - 1]);
  return hi;
}

bool ScalarMeasure::is_dirac_at(double location, double tol) const {
  return !has_density() && atoms_.size() == 1 &&
         std::abs(atoms_[0].location - location) <= tol;
}

bool ScalarMeasure::operator==(const ScalarMeasure& other) const {
  if (atoms_.size() != other.atoms_.size()) return false;
  for (size_t i = 0; i < atoms_.size(); ++i)
    if (atoms_[i].location != other.atoms_[i].location ||
        atoms_[i].weight != other.atoms_[i].weight)
      return false;
  return grid_ == other.grid_ && density_ == other.density_;
}

double DensityEstimate::trapezoid_mass() const { return trapz(grid, values); }

double DensityEstimate::cdf(double x) const {
  double s = mass_at_zero;
  for (Eigen::Index i = 0; i + 1 < grid.size(); ++i) {
    if (x <= grid[i]) break;
    double right = std::min(x, grid[i + 1]);
    double t = (right - grid[i]) / (grid[i + 1] - grid[i]);
    double v_right = values[i] + t * (values[i + 1] - values[i]);
    s += 0.5 * (values[i] + v_right) * (right - grid[i]);
  }
  return s;
}

ScalarMeasure discretize_uniform01(int n_atoms) {
  if (n_atoms < 2)
    throw DomainError("discretize_uniform01: n_atoms must be >= 2");
  std::vector<ScalarMeasure::Atom> atoms;
  atoms.reserve(n_atoms);
  double w = 1.0 / n_atoms;
  for (int k = 1; k <= n_atoms; ++k)
    atoms.push_back({(k - 0.5) / n_atoms, w});
  return ScalarMeasure::from_atoms(std::move(atoms));
}

ScalarMeasure pushforward_square(const ScalarMeasure& mu) {
  if (mu.has_density())
    throw DomainError("pushforward_square: only atomic measures supported");
  std::map<double, double> merged;
  for (const auto& a : mu.atoms()) merged[a.location * a.location] += a.weight;
  std::vector<ScalarMeasure::Atom> atoms;
  for (const auto& [loc, w] : merged) atoms.push_back({loc, w});
  return ScalarMeasure::from_atoms(std::move(atoms));
}

}  // namespace ovkron
