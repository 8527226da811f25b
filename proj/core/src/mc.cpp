#include "ovkron/mc.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ovkron/parallel.hpp"

namespace ovkron {

Rng::Rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(stream >> 32)};
  gen_.seed(seq);
}

double Rng::uniform01() {
  return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform01();
  double u2 = uniform01();
  double r = std::sqrt(-2.0 * std::log(u1));
  double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

Complex Rng::complex_gaussian() {
  constexpr double inv_sqrt2 = 0.7071067811865476;
  double re = gaussian();
  double im = gaussian();
  return Complex(re * inv_sqrt2, im * inv_sqrt2);
}

ComplexMatrix haar_unitary(Eigen::Index n, Rng& rng) {
  ComplexMatrix a(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) a(i, j) = rng.complex_gaussian();
  Eigen::HouseholderQR<ComplexMatrix> qr(a);
  ComplexMatrix q = qr.householderQ();
  ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < n; ++i) {
    Complex d = r(i, i);
    double ad = std::abs(d);
    q.col(i) *= (ad > 0.0) ? d / ad : Complex(1.0, 0.0);
  }
  return q;
}

double sample_measure(const ScalarMeasure& mu, Rng& rng) {
  double u = rng.uniform01();
  double acc = 0.0;
  for (const auto& a : mu.atoms()) {
    acc += a.weight;
    if (u <= acc) return a.location;
  }
  if (!mu.has_density()) return mu.atoms().back().location;
  // Inverse CDF over the trapezoid grid.
  double rest = u - acc;
  const RealVector& x = mu.density_grid();
  const RealVector& rho = mu.density_values();
  double cum = 0.0;
  for (Eigen::Index i = 0; i + 1 < x.size(); ++i) {
    double cell = 0.5 * (rho[i] + rho[i + 1]) * (x[i + 1] - x[i]);
    if (rest <= cum + cell && cell > 0.0) {
      double t = (rest - cum) / cell;
      return x[i] + t * (x[i + 1] - x[i]);
    }
    cum += cell;
  }
  return x[x.size() - 1];
}

namespace {

/// Haar-rotated realization of a squared-correlation law: U diag(sqrt(s)) U*.
ComplexMatrix correlation_block(const ScalarMeasure& mu, Eigen::Index n,
                                Rng& rng) {
  if (mu.is_dirac_at(0.0)) return ComplexMatrix::Zero(n, n);
  RealVector s(n);
  for (Eigen::Index i = 0; i < n; ++i)
    s[i] = std::sqrt(std::max(0.0, sample_measure(mu, rng)));
  if (n == 1 || mu.atoms().size() == 1)
    return ComplexMatrix(s.cast<Complex>().asDiagonal());
  ComplexMatrix u = haar_unitary(n, rng);
  return u * s.cast<Complex>().asDiagonal() * u.adjoint();
}

}  // namespace

std::vector<ComplexMatrix> sample_channel(const McConfig& cfg) {
  if (cfg.block_size < 1 || cfg.trials < 1)
    throw DomainError("sample_channel: block_size and trials must be >= 1");
  const ChannelModel& m = cfg.model;
  const Eigen::Index n = m.n;
  const Eigen::Index bn = cfg.block_size;

  std::vector<ComplexMatrix> out(static_cast<size_t>(cfg.trials));
  parallel_for(cfg.jobs, cfg.trials, [&](std::int64_t t) {
    Rng rng(cfg.seed, static_cast<std::uint64_t>(t));

    std::vector<ComplexMatrix> rblk, tblk;
    rblk.reserve(n);
    tblk.reserve(n);
    for (Eigen::Index k = 0; k < n; ++k)
      rblk.push_back(correlation_block(m.r2[static_cast<size_t>(k)], bn, rng));
    for (Eigen::Index k = 0; k < n; ++k)
      tblk.push_back(correlation_block(m.t2[static_cast<size_t>(k)], bn, rng));

    // X = sum_b M_b (x) G_b: a shared Ginibre block per covariance summand.
    ComplexMatrix x = ComplexMatrix::Zero(n * bn, n * bn);
    for (const auto& b : m.blocks) {
      ComplexMatrix g(bn, bn);
      for (Eigen::Index j = 0; j < bn; ++j)
        for (Eigen::Index i = 0; i < bn; ++i) g(i, j) = rng.complex_gaussian();
      double rootv = std::sqrt(b.variance);
      for (Eigen::Index i = 0; i < n; ++i) {
        double coeff = rootv * b.diag[i];
        if (coeff == 0.0) continue;
        x.block(i * bn, b.perm[static_cast<size_t>(i)] * bn, bn, bn) +=
            coeff * g;
      }
    }

    ComplexMatrix h(n * bn, n * bn);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        h.block(i * bn, j * bn, bn, bn) =
            rblk[static_cast<size_t>(i)] * x.block(i * bn, j * bn, bn, bn) *
            tblk[static_cast<size_t>(j)];

    double scale =
        1.0 / std::sqrt(static_cast<double>(m.n_t) * static_cast<double>(bn));
    out[static_cast<size_t>(t)] = scale * h.topLeftCorner(m.n_r * bn, m.n_t * bn);
  });
  return out;
}

std::vector<RealVector> trial_eigenvalues(
    const std::vector<ComplexMatrix>& samples, int jobs) {
  std::vector<RealVector> out(samples.size());
  parallel_for(jobs, static_cast<std::int64_t>(samples.size()),
               [&](std::int64_t i) {
                 const ComplexMatrix& s = samples[static_cast<size_t>(i)];
                 ComplexMatrix gram = s * s.adjoint();
                 out[static_cast<size_t>(i)] = hermitian_eigenvalues(gram);
               });
  return out;
}

EmpiricalSpectrum empirical_spectrum(const std::vector<ComplexMatrix>& samples,
                                     int bins, int jobs) {
  return empirical_spectrum(trial_eigenvalues(samples, jobs), bins);
}

EmpiricalSpectrum empirical_spectrum(const std::vector<RealVector>& spectra,
                                     int bins) {
  if (spectra.empty())
    throw DomainError("empirical_spectrum: no samples");
  if (bins < 1) throw DomainError("empirical_spectrum: bins must be >= 1");
  EmpiricalSpectrum es;
  for (const auto& ev : spectra)
    for (Eigen::Index i = 0; i < ev.size(); ++i) es.pooled.push_back(ev[i]);
  std::sort(es.pooled.begin(), es.pooled.end());

  double lo = std::min(0.0, es.pooled.front());
  double hi = es.pooled.back();
  if (hi <= lo) hi = lo + 1.0;
  double width = (hi - lo) / bins;
  es.bin_left.resize(bins);
  es.bin_right.resize(bins);
  es.counts = Eigen::VectorXi::Zero(bins);
  for (int b = 0; b < bins; ++b) {
    es.bin_left[b] = lo + b * width;
    es.bin_right[b] = lo + (b + 1) * width;
  }
  for (double v : es.pooled) {
    int b = std::min<int>(bins - 1,
                          static_cast<int>(std::floor((v - lo) / width)));
    es.counts[std::max(0, b)] += 1;
  }
  es.frequency =
      es.counts.cast<double>() / static_cast<double>(es.pooled.size());
  return es;
}

double EmpiricalSpectrum::ks_distance(
    const std::function<double(double)>& cdf) const {
  double d = 0.0;
  const double n = static_cast<double>(pooled.size());
  for (size_t i = 0; i < pooled.size(); ++i) {
    double f = cdf(pooled[i]);
    d = std::max(d, std::abs(f - static_cast<double>(i + 1) / n));
    d = std::max(d, std::abs(f - static_cast<double>(i) / n));
  }
  return d;
}

McMutualInfo mc_mutual_info(const std::vector<ComplexMatrix>& samples,
                            double power) {
  return mc_mutual_info(trial_eigenvalues(samples), power);
}

McMutualInfo mc_mutual_info(const std::vector<RealVector>& spectra,
                            double power) {
  if (!(power > 0.0))
    throw DomainError("mc_mutual_info: power must be > 0");
  if (spectra.empty()) throw DomainError("mc_mutual_info: no samples");
  std::vector<double> per_trial;
  per_trial.reserve(spectra.size());
  for (const auto& ev : spectra) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
      double v = std::log1p(power * std::max(0.0, ev[i]));
      if (!std::isfinite(v))
        throw Error("mc_mutual_info: non-finite log determinant");
      s += v;
    }
    per_trial.push_back(s / static_cast<double>(ev.size()));
  }
  McMutualInfo out;
  out.trials = static_cast<int>(per_trial.size());
  for (double v : per_trial) out.mean += v;
  out.mean /= out.trials;
  if (out.trials > 1) {
    double var = 0.0;
    for (double v : per_trial) var += (v - out.mean) * (v - out.mean);
    var /= (out.trials - 1);
    out.std_error = std::sqrt(var / out.trials);
  }
  return out;
}

ComplexMatrix entrywise_exp(const ComplexMatrix& a, double gamma) {
  ComplexMatrix out(a.rows(), a.cols());
  const Complex ig(0.0, gamma);
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      out(i, j) = std::exp(ig * a(i, j));
  return out;
}

namespace {

void check_gamma_open_unit(double gamma) {
  if (!(gamma > 0.0) || !(gamma < 1.0))
    throw DomainError("gamma bound checks require gamma in (0, 1)");
}

}  // namespace

BoundReport gamma_bulk_bound_check(const ComplexMatrix& a, double gamma) {
  check_gamma_open_unit(gamma);
  const Eigen::Index n = a.rows();
  ComplexMatrix x = entrywise_exp(a, gamma);
  RealVector sx = singular_values(x / gamma);
  RealVector sa = singular_values(a);
  double opnorm = sa.size() > 0 ? sa[0] : 0.0;
  BoundReport rep;
  for (Eigen::Index k = 1; k < n; ++k) rep.lhs += std::abs(sx[k] - sa[k]);
  rep.lhs /= static_cast<double>(n);
  rep.rhs = gamma * std::exp(opnorm) + 2.0 * opnorm / static_cast<double>(n);
  return rep;
}

BoundReport gamma_top_singular_check(const ComplexMatrix& a, double gamma) {
  check_gamma_open_unit(gamma);
  const double n = static_cast<double>(a.rows());
  ComplexMatrix x = entrywise_exp(a, gamma);
  RealVector sx = singular_values(x / gamma);
  RealVector sa = singular_values(a);
  double opnorm = sa.size() > 0 ? sa[0] : 0.0;
  BoundReport rep;
  rep.lhs = std::abs(sx[0] / (n / gamma) - 1.0);
  rep.rhs = gamma * (gamma * std::exp(opnorm) + opnorm);
  return rep;
}

MomentComparison gamma_infinity_moment(const RealMatrix& r, const RealMatrix& t,
                                       const Eigen::MatrixXi& exponents,
                                       double gamma, int trials,
                                       std::uint64_t seed) {
  const Eigen::Index n = r.rows();
  if (r.cols() != n || t.rows() != n || t.cols() != n ||
      exponents.rows() != n || exponents.cols() != n)
    throw DomainError("gamma_infinity_moment: all inputs must be square NxN");
  if (!(gamma > 0.0))
    throw DomainError("gamma_infinity_moment: gamma must be > 0");
  if (trials < 2)
    throw DomainError("gamma_infinity_moment: need at least 2 trials");
  auto full_rank = [n](const RealMatrix& m) {
    Eigen::ColPivHouseholderQR<RealMatrix> qr(m);
    return qr.rank() == n;
  };
  if (!full_rank(r) || !full_rank(t))
    throw DomainError("gamma_infinity_moment: R and T must be full rank");

  MomentComparison out;
  // Closed form: prod_ij exp(-(gamma^2/2) (sum_kl n_kl R_ki T_jl)^2).
  double log_cf = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      double c = 0.0;
      for (Eigen::Index k = 0; k < n; ++k)
        for (Eigen::Index l = 0; l < n; ++l)
          c += exponents(k, l) * r(k, i) * t(j, l);
      log_cf -= 0.5 * gamma * gamma * c * c;
    }
  }
  out.closed_form = Complex(std::exp(log_cf), 0.0);

  Rng rng(seed);
  std::vector<Complex> values;
  values.reserve(trials);
  for (int trial = 0; trial < trials; ++trial) {
    RealMatrix x(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index i = 0; i < n; ++i) x(i, j) = rng.gaussian();
    RealMatrix theta = r * x * t;
    Complex prod(1.0, 0.0);
    for (Eigen::Index k = 0; k < n; ++k)
      for (Eigen::Index l = 0; l < n; ++l)
        prod *= std::exp(Complex(0.0, gamma * exponents(k, l) * theta(k, l)));
    values.push_back(prod);
  }
  Complex mean(0.0, 0.0);
  for (Complex v : values) mean += v;
  mean /= static_cast<double>(trials);
  out.mc_estimate = mean;
  double var_re = 0.0, var_im = 0.0;
  for (Complex v : values) {
    var_re += (v.real() - mean.real()) * (v.real() - mean.real());
    var_im += (v.imag() - mean.imag()) * (v.imag() - mean.imag());
  }
  var_re /= (trials - 1);
  var_im /= (trials - 1);
  out.std_error_re = std::sqrt(var_re / trials);
  out.std_error_im = std::sqrt(var_im / trials);
  out.trials = trials;
  return out;
}

}  // namespace ovkron
