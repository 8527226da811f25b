#include "ovkron/channel.hpp"

#include <algorithm>
#include <mutex>
#include <cmath>
#include <numbers>

namespace ovkron {

namespace {

Complex sqrt_upper(Complex zeta) {
  Complex s = std::sqrt(zeta);
  if (s.imag() < 0.0) s = -s;
  return s;
}

}  // namespace

double ChannelModel::entry_variance(Eigen::Index k, Eigen::Index l) const {
  double s = 0.0;
  for (const auto& b : blocks)
    if (b.perm[static_cast<size_t>(k)] == l)
      s += b.variance * b.diag[k] * b.diag[k];
  return s;
}

double ChannelModel::mean_spectrum() const {
  // E tr_{n_r}(HH*/n_t) = (1/(n_r n_t)) sum_k E r_k^2 sum_l sigma_kl^2 E t_l^2
  double s = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    double row = 0.0;
    for (Eigen::Index l = 0; l < n; ++l)
      row += entry_variance(k, l) * t2[static_cast<size_t>(l)].mean();
    s += r2[static_cast<size_t>(k)].mean() * row;
  }
  return s / (static_cast<double>(n_r) * static_cast<double>(n_t));
}

bool ChannelModel::operator==(const ChannelModel& o) const {
  return n_r == o.n_r && n_t == o.n_t && n == o.n && r2 == o.r2 &&
         t2 == o.t2 && blocks == o.blocks;
}

ChannelModel build_model(const ModelSpec& spec) {
  if (spec.n_r < 1 || spec.n_t < 1)
    throw DomainError("build_model: dimensions must be positive");
  if (static_cast<Eigen::Index>(spec.r2.size()) != spec.n_r ||
      static_cast<Eigen::Index>(spec.t2.size()) != spec.n_t)
    throw DomainError("build_model: need one squared-correlation measure per "
                      "antenna on each side");
  if (spec.blocks.has_value() == spec.entry_variances.has_value())
    throw DomainError(
        "build_model: exactly one of blocks / entry_variances required");
  if (!(spec.gamma > 0.0)) throw DomainError("build_model: gamma must be > 0");

  ChannelModel m;
  m.n_r = spec.n_r;
  m.n_t = spec.n_t;
  m.n = std::max(spec.n_r, spec.n_t);
  m.r2 = spec.r2;
  m.t2 = spec.t2;
  // Rectangular models are padded with zero correlation operators.
  while (static_cast<Eigen::Index>(m.r2.size()) < m.n)
    m.r2.push_back(ScalarMeasure::dirac(0.0));
  while (static_cast<Eigen::Index>(m.t2.size()) < m.n)
    m.t2.push_back(ScalarMeasure::dirac(0.0));

  double g2 = spec.gamma * spec.gamma;
  if (spec.blocks) {
    if (spec.blocks->empty())
      throw DomainError("build_model: block list must be nonempty");
    for (const auto& b : *spec.blocks) {
      if (b.diag.size() != m.n ||
          static_cast<Eigen::Index>(b.perm.size()) != m.n)
        throw DomainError("build_model: block dimension must equal padded n");
      if (!(b.variance > 0.0))
        throw DomainError("build_model: block variances must be positive");
      if (b.diag.minCoeff() < 0.0)
        throw DomainError("build_model: block diagonals must be nonnegative");
      inverse_permutation(b.perm);  // validates
      CovarianceBlock nb = b;
      nb.variance *= g2;
      m.blocks.push_back(std::move(nb));
    }
  } else {
    const RealMatrix& sv = *spec.entry_variances;
    if (sv.rows() != spec.n_r || sv.cols() != spec.n_t)
      throw DomainError("build_model: entry_variances must be n_r x n_t");
    if (sv.minCoeff() < 0.0)
      throw DomainError("build_model: entry variances must be nonnegative");
    for (Eigen::Index k = 0; k < spec.n_r; ++k) {
      for (Eigen::Index l = 0; l < spec.n_t; ++l) {
        if (sv(k, l) == 0.0) continue;
        CovarianceBlock b;
        b.variance = g2 * sv(k, l);
        b.diag = RealVector::Zero(m.n);
        b.diag[k] = 1.0;
        // Transposition (k l) completed to the identity: sends k to l.
        b.perm = identity_permutation(m.n);
        std::swap(b.perm[static_cast<size_t>(k)],
                  b.perm[static_cast<size_t>(l)]);
        m.blocks.push_back(std::move(b));
      }
    }
    if (m.blocks.empty()) {
      // All-zero covariance: keep one null block so the pipeline stays
      // well-formed; it contributes the zero variable.
      CovarianceBlock b;
      b.variance = g2;
      b.diag = RealVector::Zero(m.n);
      b.perm = identity_permutation(m.n);
      m.blocks.push_back(std::move(b));
    }
  }

  // The implied n^2 x n^2 covariance Sigma^2 = sum_b var_b vec(M_b) vec(M_b)*
  // must be positive semidefinite.
  ComplexMatrix sigma2 = ComplexMatrix::Zero(m.n * m.n, m.n * m.n);
  for (const auto& b : m.blocks) {
    ComplexVector v = ComplexVector::Zero(m.n * m.n);
    for (Eigen::Index i = 0; i < m.n; ++i)
      v[b.perm[static_cast<size_t>(i)] * m.n + i] = b.diag[i];
    sigma2.noalias() += b.variance * (v * v.adjoint());
  }
  RealVector ev = hermitian_eigenvalues(sigma2);
  if (ev[ev.size() - 1] < -1e-10 * std::max(1.0, ev[0]))
    throw DomainError("build_model: implied covariance not PSD");

  return m;
}

MatrixCauchyMap q_map(const ChannelModel& model) {
  return correlation_corner_map(model.r2, model.t2);
}

MatrixCauchyMap xhat_map(const ChannelModel& model,
                         const FixedPointConfig& cfg) {
  MatrixCauchyMap acc = [&] {
    const auto& b0 = model.blocks.front();
    return circular_block_map(std::sqrt(b0.variance) * b0.diag, b0.perm);
  }();
  for (size_t i = 1; i < model.blocks.size(); ++i) {
    const auto& b = model.blocks[i];
    acc = free_additive_convolution(
        std::move(acc), circular_block_map(std::sqrt(b.variance) * b.diag, b.perm),
        cfg);
  }
  return acc;
}

ComplexVector cauchy_xhat(const ChannelModel& model, const ComplexVector& j,
                          const FixedPointConfig& cfg, EvalContext* ctx) {
  return xhat_map(model, cfg).eval_diag(j, ctx);
}

namespace {

/// One multiplicative solve of G_{Q Xhat}(w I) with the eta ladder handled
/// by the caller through `warm`.
ComplexVector solve_product(const MatrixCauchyMap& q,
                            const MatrixCauchyMap& xh, Complex w,
                            const FixedPointConfig& cfg, EvalContext* ctx,
                            ComplexVector* warm) {
  const ComplexVector* w0 = (warm && warm->size() == q.dim()) ? warm : nullptr;
  auto res = multiplicative_subordinator_diag(q, xh, w, cfg, ctx, w0);
  if (warm) *warm = res.omega2;
  return res.g;
}

}  // namespace

Complex scalar_cauchy_hhstar(const ChannelModel& model, Complex zeta,
                             const PipelineConfig& cfg) {
  if (!(zeta.imag() > 0.0))
    throw DomainError("scalar_cauchy_hhstar: Im(zeta) must be > 0");

  bool all_zero = true;
  for (const auto& b : model.blocks)
    all_zero &= (b.variance * b.diag.cwiseAbs().maxCoeff() == 0.0);
  if (all_zero) return 1.0 / zeta;  // HH* is the zero operator

  double nt = static_cast<double>(model.n_t);
  double nr = static_cast<double>(model.n_r);
  double nn = static_cast<double>(model.n);

  // F is the law of HH*/n_t per receive antenna; work at the dilated point.
  Complex zp = nt * zeta;

  MatrixCauchyMap q = q_map(model);
  MatrixCauchyMap xh = xhat_map(model, cfg.fixed_point);
  EvalContext ctx;
  ComplexVector warm;

  // Continuation ladder in the imaginary offset, warm-starting each level.
  double target_eta = zp.imag();
  std::vector<double> ladder;
  for (double e = cfg.eta_ladder_top; e > target_eta * (1.0 + 1e-12);
       e /= 10.0)
    ladder.push_back(e);
  ladder.push_back(target_eta);

  ComplexVector g;
  for (double e : ladder) {
    Complex z_level(zp.real(), e);
    Complex w = sqrt_upper(z_level);
    g = solve_product(q, xh, w, cfg.fixed_point, &ctx, &warm);
  }

  Complex w = sqrt_upper(zp);
  Complex g_herm = g.mean();       // scalar transform of Q Xhat at w
  Complex g_square = g_herm / w;   // square relation: law of Hhat^2 at zp

  // Unpad: each nonzero singular value appears twice among the 2n
  // coordinates, so the per-receive-antenna law scales the continuous part
  // by n/n_r and drops the structural atom at zero.
  Complex g_rx = (nn / nr) * g_square - ((nn - nr) / nr) / zp;
  return nt * g_rx;
}

namespace {

DensityEstimate density_impl(const ChannelModel& model, double xi_max,
                             int points, double eta, const PipelineConfig& cfg,
                             std::vector<double>* failed_points) {
  if (points < 16) throw DomainError("spectral_density: points must be >= 16");

  std::mutex fail_mutex;
  auto evaluator = [&](Complex z) -> Complex {
    if (!failed_points) return scalar_cauchy_hhstar(model, z, cfg);
    try {
      return scalar_cauchy_hhstar(model, z, cfg);
    } catch (const Error&) {
      std::lock_guard<std::mutex> lock(fail_mutex);
      failed_points->push_back(z.real());
      return Complex(0.0, 0.0);
    }
  };

  if (xi_max <= 0.0) {
    xi_max = std::max(1.0, 8.0 * model.mean_spectrum());
    for (int i = 0; i < 60; ++i) {
      double probe_eta = eta > 0.0 ? eta : default_eta(xi_max, points);
      Complex g = evaluator(Complex(xi_max, probe_eta));
      double density = std::max(0.0, -g.imag() / std::numbers::pi);
      if (density < 1e-8) break;
      xi_max *= 2.0;
    }
  }
  double eta_final = eta > 0.0 ? eta : default_eta(xi_max, points);

  RealVector grid(points);
  for (int k = 0; k < points; ++k)
    grid[k] = xi_max * static_cast<double>(k + 1) / points;

  DensityEstimate out = stieltjes_invert(evaluator, grid, eta_final, cfg.jobs);
  if (failed_points) std::sort(failed_points->begin(), failed_points->end());
  return out;
}

}  // namespace

DensityEstimate spectral_density(const ChannelModel& model, double xi_max,
                                 int points, double eta,
                                 const PipelineConfig& cfg) {
  return density_impl(model, xi_max, points, eta, cfg, nullptr);
}

DensityEstimate spectral_density_tolerant(const ChannelModel& model,
                                          double xi_max, int points,
                                          double eta,
                                          const PipelineConfig& cfg,
                                          std::vector<double>& failed_points) {
  return density_impl(model, xi_max, points, eta, cfg, &failed_points);
}

double mutual_information(const DensityEstimate& density, double power) {
  if (!(power > 0.0))
    throw DomainError("mutual_information: power must be > 0");
  const RealVector& x = density.grid;
  const RealVector& f = density.values;
  double s = 0.0;
  for (Eigen::Index i = 0; i + 1 < x.size(); ++i) {
    double a = std::log1p(power * x[i]) * f[i];
    double b = std::log1p(power * x[i + 1]) * f[i + 1];
    s += 0.5 * (a + b) * (x[i + 1] - x[i]);
  }
  return s;  // the atom at zero contributes log(1) = 0
}

MutualInfoCurve mutual_info_curve(const ChannelModel& model,
                                  const std::vector<double>& powers,
                                  const PipelineConfig& cfg,
                                  const CurveOptions& opts) {
  DensityEstimate f =
      spectral_density(model, opts.xi_max, opts.points, opts.eta, cfg);
  MutualInfoCurve curve;
  curve.points.reserve(powers.size());
  for (double p : powers) curve.points.emplace_back(p, mutual_information(f, p));
  return curve;
}

MutualInfoCurve classical_kronecker_reference(const ScalarMeasure& r2,
                                              const ScalarMeasure& t2,
                                              const std::vector<double>& powers,
                                              const PipelineConfig& cfg,
                                              const CurveOptions& opts) {
  ModelSpec spec;
  spec.n_r = 1;
  spec.n_t = 1;
  spec.r2 = {r2};
  spec.t2 = {t2};
  CovarianceBlock b;
  b.variance = 1.0;
  b.diag = RealVector::Ones(1);
  b.perm = identity_permutation(1);
  spec.blocks = std::vector<CovarianceBlock>{b};
  return mutual_info_curve(build_model(spec), powers, cfg, opts);
}

}  // namespace ovkron
