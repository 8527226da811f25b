#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "ovkron/channel.hpp"

namespace ovkron {

/// Deterministic random stream: raw bits from mt19937_64, uniform and
/// Gaussian variates mapped with fixed arithmetic so identical (seed, stream)
/// pairs reproduce identical output on any platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t raw() { return gen_(); }
  /// Uniform on (0, 1), 53-bit resolution, never exactly 0 or 1.
  double uniform01();
  /// Standard normal via Box-Muller.
  double gaussian();
  /// Standard complex Gaussian, E|z|^2 = 1.
  Complex complex_gaussian();

 private:
  std::mt19937_64 gen_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Haar-distributed unitary from the QR factorization of a Ginibre matrix
/// with the phase correction diag(R_ii/|R_ii|).
ComplexMatrix haar_unitary(Eigen::Index n, Rng& rng);

/// One draw from a measure (atoms by cumulative weight, density part by
/// inverse-CDF on the trapezoid grid).
double sample_measure(const ScalarMeasure& mu, Rng& rng);

struct McConfig {
  Eigen::Index block_size = 500;  // N, the per-operator dimension
  int trials = 20;
  std::uint64_t seed = 42;
  ChannelModel model;
  int jobs = 1;
};

/// Samples finite-size channel realizations H = R X T with Haar-rotated
/// atom-sampled correlation blocks and shared Ginibre blocks per covariance
/// summand. Returned matrices are the unpadded n_r N x n_t N channels
/// pre-scaled by 1/sqrt(n_t N), so eigenvalues of S S* target the pipeline
/// law F directly. Trial t uses the substream (seed, t); outputs are
/// bit-for-bit reproducible for fixed (seed, config).
std::vector<ComplexMatrix> sample_channel(const McConfig& cfg);

/// Eigenvalues of S S* per sample, each sorted non-increasing.
std::vector<RealVector> trial_eigenvalues(
    const std::vector<ComplexMatrix>& samples, int jobs = 1);

struct EmpiricalSpectrum {
  std::vector<double> pooled;  // all eigenvalues, ascending
  RealVector bin_left;
  RealVector bin_right;
  Eigen::VectorXi counts;
  RealVector frequency;  // counts / total

  /// Kolmogorov-Smirnov distance of the pooled sample against a CDF.
  double ks_distance(const std::function<double(double)>& cdf) const;
};

EmpiricalSpectrum empirical_spectrum(const std::vector<ComplexMatrix>& samples,
                                     int bins, int jobs = 1);
EmpiricalSpectrum empirical_spectrum(const std::vector<RealVector>& spectra,
                                     int bins);

struct McMutualInfo {
  double mean = 0.0;
  double std_error = 0.0;
  int trials = 0;
};

/// Per-trial (1/rows) log det(I + P S S*), averaged, with the standard error
/// across trials. Computed through eigenvalues.
McMutualInfo mc_mutual_info(const std::vector<ComplexMatrix>& samples,
                            double power);
McMutualInfo mc_mutual_info(const std::vector<RealVector>& spectra,
                            double power);

/// Entrywise exponential exp(i gamma A_kl).
ComplexMatrix entrywise_exp(const ComplexMatrix& a, double gamma);

struct BoundReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double slack() const { return rhs - lhs; }
  bool holds() const { return lhs <= rhs; }
};

/// Bulk singular-value bound for X = exp_o(i gamma A):
/// (1/N) sum_{k>=2} |sigma_k(X/gamma) - sigma_k(A)|
///   <= gamma exp(||A||) + 2||A||/N. Requires gamma in (0, 1).
BoundReport gamma_bulk_bound_check(const ComplexMatrix& a, double gamma);

/// Top singular value bound: |sigma_1(X/gamma)/(N/gamma) - 1|
///   <= gamma (gamma exp(||A||) + ||A||).
BoundReport gamma_top_singular_check(const ComplexMatrix& a, double gamma);

struct MomentComparison {
  Complex closed_form;
  Complex mc_estimate;
  double std_error_re = 0.0;
  double std_error_im = 0.0;
  int trials = 0;
};

/// Joint moment E prod_kl A_kl^{n_kl} of A = exp_o(i gamma R X T) for real
/// full-rank R, T and real standard Gaussian X: the closed form
/// prod_ij exp(-(gamma^2/2)(sum_kl n_kl R_ki T_jl)^2) next to a Monte Carlo
/// estimate of the same moment.
MomentComparison gamma_infinity_moment(const RealMatrix& r, const RealMatrix& t,
                                       const Eigen::MatrixXi& exponents,
                                       double gamma, int trials,
                                       std::uint64_t seed);

}  // namespace ovkron
