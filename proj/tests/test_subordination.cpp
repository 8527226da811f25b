#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ovkron/subordination.hpp"
#include "support/oracles.hpp"

using namespace ovkron;
using doctest::Approx;

namespace {

MatrixCauchyMap semicircle_map1() {
  return MatrixCauchyMap::from_scalar([](Complex z) {
    if (z.imag() < 0.0) return std::conj(oracles::semicircle_g(std::conj(z)));
    return oracles::semicircle_g(z);
  });
}

MatrixCauchyMap scalar_measure_map(const ScalarMeasure& mu) {
  return MatrixCauchyMap::from_scalar(
      [mu](Complex z) { return cauchy_of_measure_extended(mu, z); });
}

ScalarMeasure mu_r2() {
  return ScalarMeasure::from_atoms({{0.5, 0.5}, {1.5, 0.5}});
}
ScalarMeasure mu_t2() {
  return ScalarMeasure::from_atoms({{0.75, 0.5}, {1.25, 0.5}});
}

FixedPointConfig tight() {
  FixedPointConfig cfg;
  cfg.tolerance = 1e-13;
  return cfg;
}

}  // namespace

TEST_CASE("additive: zero variable leaves the other transform unchanged") {
  Rng rng(3);
  MatrixCauchyMap zero = zero_variable_map(4);
  MatrixCauchyMap q = correlation_corner_map({mu_r2(), mu_r2()},
                                             {mu_t2(), mu_t2()});
  ComplexVector d = oracles::random_diag_upper(4, rng);
  auto res = additive_subordinator(q, zero, ComplexMatrix(d.asDiagonal()),
                                   tight());
  CHECK(max_abs(ComplexMatrix(res.omega1 - ComplexMatrix(d.asDiagonal()))) <
        1e-11);
  ComplexVector direct = q.eval_diag(d);
  CHECK(max_abs(ComplexMatrix(res.g_sum - ComplexMatrix(direct.asDiagonal()))) <
        1e-11);
}

TEST_CASE("additive: two free semicirculars give the variance-2 closed form") {
  MatrixCauchyMap s = semicircle_map1();
  for (Complex zeta : {Complex(0.0, 3.0), Complex(1.0, 2.0), Complex(-2.0, 1.0)}) {
    ComplexMatrix b = zeta * ComplexMatrix::Identity(1, 1);
    auto res = additive_subordinator(s, s, b, tight());
    CHECK(std::abs(res.g_sum(0, 0) - oracles::semicircle_var2_g(zeta)) <= 1e-8);
    CHECK(res.report.converged);
  }
}

TEST_CASE("additive: Theorem-3 closed form equals the fold of unit blocks") {
  // Q = sum r_k^2 E_kk + sum t_k^2 E_{n+k,n+k}: the one-coordinate transforms
  // combined by repeated additive subordination must reproduce the diagonal
  // closed form.
  Rng rng(101);
  Eigen::Index n = 2;
  std::vector<ScalarMeasure> r2 = {mu_r2(), discretize_uniform01(8)};
  std::vector<ScalarMeasure> t2 = {mu_t2(), mu_r2()};

  MatrixCauchyMap acc = unit_coordinate_map(r2[0], 0, n);
  acc = free_additive_convolution(acc, unit_coordinate_map(r2[1], 1, n), tight());
  acc = free_additive_convolution(acc, unit_coordinate_map(t2[0], n + 0, n), tight());
  acc = free_additive_convolution(acc, unit_coordinate_map(t2[1], n + 1, n), tight());

  for (int rep = 0; rep < 3; ++rep) {
    ComplexVector d = oracles::random_diag_upper(2 * n, rng);
    ComplexVector fold = acc.eval_diag(d);
    ComplexVector closed = cauchy_q_diagonal(r2, t2, d);
    CHECK((fold - closed).cwiseAbs().maxCoeff() <= 1e-8);
  }
}

TEST_CASE("additive: swap symmetry of the free sum") {
  Rng rng(103);
  MatrixCauchyMap a = scalar_measure_map(mu_r2());
  MatrixCauchyMap b = scalar_measure_map(mu_t2());
  for (int rep = 0; rep < 4; ++rep) {
    Complex zeta(2.0 * rng.uniform01() - 1.0, 0.7 + rng.uniform01());
    ComplexMatrix z = zeta * ComplexMatrix::Identity(1, 1);
    auto ab = additive_subordinator(a, b, z, tight());
    auto ba = additive_subordinator(b, a, z, tight());
    CHECK(std::abs(ab.g_sum(0, 0) - ba.g_sum(0, 0)) <= 1e-9);
  }
}

TEST_CASE("additive: free cumulant oracle on two-atom measures (8 moments)") {
  ScalarMeasure mua = mu_r2();
  ScalarMeasure mub = ScalarMeasure::from_atoms({{0.25, 0.25}, {2.0, 0.75}});
  auto ma = oracles::moments_of_atoms({{0.5, 0.5}, {1.5, 0.5}}, 8);
  auto mb = oracles::moments_of_atoms({{0.25, 0.25}, {2.0, 0.75}}, 8);
  auto ka = oracles::cumulants_from_moments(ma);
  auto kb = oracles::cumulants_from_moments(mb);
  std::vector<double> ksum(9, 0.0);
  for (int i = 1; i <= 8; ++i) ksum[i] = ka[i] + kb[i];
  auto expect = oracles::moments_from_cumulants(ksum);

  MatrixCauchyMap ga = scalar_measure_map(mua);
  MatrixCauchyMap gb = scalar_measure_map(mub);
  FixedPointConfig cfg = tight();
  auto g_sum = [&](Complex z) {
    ComplexMatrix b = z * ComplexMatrix::Identity(1, 1);
    return additive_subordinator(ga, gb, b, cfg).g_sum(0, 0);
  };
  auto got = oracles::moments_from_transform(g_sum, 8.0, 8);
  for (int k = 1; k <= 8; ++k)
    CHECK(std::abs(got[k] - expect[k]) <= 1e-6 * std::max(1.0, expect[k]));
}

TEST_CASE("multiplicative: deterministic positive factor dilates") {
  double c = 2.5;
  MatrixCauchyMap x = deterministic_diagonal_map(ComplexVector::Constant(1, c));
  MatrixCauchyMap y = scalar_measure_map(mu_t2());
  for (Complex zeta : {Complex(0.5, 1.5), Complex(3.0, 0.3)}) {
    auto res = multiplicative_subordinator(x, y, zeta, tight());
    Complex expect = cauchy_of_measure_extended(mu_t2(), zeta / c) / c;
    CHECK(std::abs(res.g(0, 0) - expect) <= 1e-10);
  }
}

TEST_CASE("multiplicative: identity factor is neutral") {
  MatrixCauchyMap x = scalar_measure_map(mu_r2());
  MatrixCauchyMap one = deterministic_diagonal_map(ComplexVector::Ones(1));
  for (Complex zeta : {Complex(0.5, 1.1), Complex(-1.0, 2.0)}) {
    auto res = multiplicative_subordinator(x, one, zeta, tight());
    CHECK(std::abs(res.g(0, 0) - cauchy_of_measure_extended(mu_r2(), zeta)) <=
          1e-10);
  }
}

TEST_CASE("multiplicative: S-transform oracle on two-atom measures") {
  auto atoms_a = std::vector<std::pair<double, double>>{{0.5, 0.5}, {1.5, 0.5}};
  auto atoms_b = std::vector<std::pair<double, double>>{{0.75, 0.5}, {1.25, 0.5}};
  auto ma = oracles::moments_of_atoms(atoms_a, 8);
  auto mb = oracles::moments_of_atoms(atoms_b, 8);
  auto expect = oracles::multiplicative_convolution_moments(ma, mb, 8);

  MatrixCauchyMap gx = scalar_measure_map(mu_r2());
  MatrixCauchyMap gy = scalar_measure_map(mu_t2());
  FixedPointConfig cfg = tight();
  auto g_prod = [&](Complex z) {
    return multiplicative_subordinator(gx, gy, z, cfg).g(0, 0);
  };
  auto got = oracles::moments_from_transform(g_prod, 6.0, 8);
  for (int k = 1; k <= 8; ++k)
    CHECK(std::abs(got[k] - expect[k]) <= 1e-6 * std::max(1.0, expect[k]));
}

TEST_CASE("fixed-point residual invariant: residual <= 10 tolerance") {
  Rng rng(107);
  FixedPointConfig cfg;
  cfg.tolerance = 1e-12;
  MatrixCauchyMap a = scalar_measure_map(mu_r2());
  MatrixCauchyMap b = scalar_measure_map(mu_t2());
  for (int rep = 0; rep < 20; ++rep) {
    Complex zeta(3.0 * rng.uniform01() - 1.0, 0.05 + 2.0 * rng.uniform01());
    ComplexMatrix z = zeta * ComplexMatrix::Identity(1, 1);
    auto res = additive_subordinator(a, b, z, cfg);
    REQUIRE(res.report.converged);
    CHECK(res.report.residual <= 10.0 * cfg.tolerance);
    // verify the reported residual against a recomputed f(omega) - omega
    ComplexMatrix w = res.omega1;
    ComplexMatrix rx = inverse(a.eval_extended(w)) - w;
    ComplexMatrix arg = rx + z;
    ComplexMatrix f = inverse(b.eval_extended(arg)) - arg + z;
    double resid = max_abs(ComplexMatrix(f - w)) / std::max(1.0, max_abs(w));
    CHECK(resid <= 10.0 * cfg.tolerance);
  }
}

TEST_CASE("subordinator omega stays in the upper half-plane") {
  Rng rng(109);
  MatrixCauchyMap q = correlation_corner_map({mu_r2(), mu_r2()},
                                             {mu_t2(), mu_t2()});
  MatrixCauchyMap x1 =
      circular_block_map(RealVector::Ones(2), identity_permutation(2));
  for (int rep = 0; rep < 10; ++rep) {
    ComplexVector d = oracles::random_diag_upper(4, rng);
    auto res = additive_subordinator_diag(q, x1, d, tight());
    for (int i = 0; i < 4; ++i) CHECK(res.omega1[i].imag() > 0.0);
  }
}

TEST_CASE("non-convergence carries the last residual") {
  FixedPointConfig cfg;
  cfg.tolerance = 1e-16;
  cfg.max_iterations = 3;
  MatrixCauchyMap a = scalar_measure_map(mu_r2());
  MatrixCauchyMap b = scalar_measure_map(mu_t2());
  ComplexMatrix z = Complex(0.5, 0.2) * ComplexMatrix::Identity(1, 1);
  CHECK_THROWS_AS(additive_subordinator(a, b, z, cfg), NonConvergenceError);
  try {
    additive_subordinator(a, b, z, cfg);
  } catch (const NonConvergenceError& e) {
    CHECK(e.report().iterations == 3);
    CHECK(e.report().residual > 0.0);
  }
}

TEST_CASE("half-plane violation flags an invalid transform pair") {
  // G(B) = B maps H+ to H+, which is not a Cauchy transform; the iterate is
  // driven out of the half-plane.
  MatrixCauchyMap bogus = MatrixCauchyMap::from_scalar(
      [](Complex z) { return z; });
  MatrixCauchyMap zero = zero_variable_map(1);
  ComplexMatrix b = Complex(0.0, 2.0) * ComplexMatrix::Identity(1, 1);
  CHECK_THROWS_AS(additive_subordinator(zero, bogus, b, tight()),
                  HalfPlaneViolationError);
}

TEST_CASE("config validation") {
  FixedPointConfig cfg;
  cfg.tolerance = 0.0;
  ComplexMatrix b = Complex(0.0, 1.0) * ComplexMatrix::Identity(1, 1);
  MatrixCauchyMap zero = zero_variable_map(1);
  CHECK_THROWS_AS(additive_subordinator(zero, zero, b, cfg), DomainError);
  cfg = FixedPointConfig{};
  cfg.damping = 1.5;
  CHECK_THROWS_AS(additive_subordinator(zero, zero, b, cfg), DomainError);
}

TEST_CASE("solver diagnostics log line is machine readable") {
  std::vector<std::string> lines;
  FixedPointConfig cfg = tight();
  cfg.logger = [&](const SolveReport& r) { lines.push_back(r.to_log_line()); };
  MatrixCauchyMap s = semicircle_map1();
  ComplexMatrix b = Complex(0.0, 3.0) * ComplexMatrix::Identity(1, 1);
  additive_subordinator(s, s, b, cfg);
  REQUIRE(!lines.empty());
  CHECK(lines.back().find("solve=additive") != std::string::npos);
  CHECK(lines.back().find("iters=") != std::string::npos);
  CHECK(lines.back().find("residual=") != std::string::npos);
  CHECK(lines.back().find("converged=1") != std::string::npos);
}
