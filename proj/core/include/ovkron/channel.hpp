#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "ovkron/subordination.hpp"

namespace ovkron {

/// One summand of the circular-family decomposition X = sum c_b D_b P_b:
/// a free standard circular variable scaled by `variance`, carried by the
/// diagonal-times-permutation matrix diag(diag) * P. The permutation is
/// stored as pi with M_{i, pi(i)} = diag[i] (0-based).
struct CovarianceBlock {
  double variance = 1.0;
  RealVector diag;
  std::vector<Eigen::Index> perm;

  bool operator==(const CovarianceBlock& o) const {
    return variance == o.variance && diag == o.diag && perm == o.perm;
  }
};

/// Input description of a model; consumed by build_model.
struct ModelSpec {
  Eigen::Index n_r = 0;
  Eigen::Index n_t = 0;
  double gamma = 1.0;
  std::vector<ScalarMeasure> r2;  // laws of r_k^2, size n_r
  std::vector<ScalarMeasure> t2;  // laws of t_k^2, size n_t
  std::optional<std::vector<CovarianceBlock>> blocks;
  std::optional<RealMatrix> entry_variances;  // n_r x n_t
};

/// Fully assembled operator-valued Kronecker model. Dimensions are padded to
/// n = max(n_r, n_t) with zero correlation measures; gamma^2 is folded into
/// the block variances.
struct ChannelModel {
  Eigen::Index n_r = 0;
  Eigen::Index n_t = 0;
  Eigen::Index n = 0;
  std::vector<ScalarMeasure> r2;  // size n
  std::vector<ScalarMeasure> t2;  // size n
  std::vector<CovarianceBlock> blocks;

  /// Entrywise effective variance sum_b var_b |(M_b)_{kl}|^2 (0-based k, l).
  double entry_variance(Eigen::Index k, Eigen::Index l) const;
  /// Mean of the normalized spectral law F (mean of HH*/n_t per receive
  /// antenna).
  double mean_spectrum() const;

  bool operator==(const ChannelModel& o) const;
};

/// Assembles a ChannelModel: pads rectangular models, expands the
/// entrywise-variance shorthand into single-entry blocks, folds gamma^2 into
/// the block variances, and validates that the implied covariance is
/// positive semidefinite.
ChannelModel build_model(const ModelSpec& spec);

struct PipelineConfig {
  FixedPointConfig fixed_point;
  int jobs = 1;
  /// Top of the eta continuation ladder used when evaluating near the axis.
  double eta_ladder_top = 1e-1;
};

/// Transform of the correlation corner Q for this model.
MatrixCauchyMap q_map(const ChannelModel& model);

/// Transform of the full hermitized circular part: the per-block closed
/// forms combined by a left fold of additive free convolutions.
MatrixCauchyMap xhat_map(const ChannelModel& model,
                         const FixedPointConfig& cfg);

/// G_{X-hat}(diag(j)) for diagonal j in H+.
ComplexVector cauchy_xhat(const ChannelModel& model, const ComplexVector& j,
                          const FixedPointConfig& cfg,
                          EvalContext* ctx = nullptr);

/// Scalar Cauchy transform of the normalized spectral law F of HH*: the
/// multiplicative subordination of (Q, X-hat) evaluated at sqrt(zeta),
/// converted through the square relation, traced, and corrected for
/// rectangular padding. Evaluations near the real axis run down an eta
/// ladder with warm starts.
Complex scalar_cauchy_hhstar(const ChannelModel& model, Complex zeta,
                             const PipelineConfig& cfg);

/// Spectral density of F on a uniform grid of (0, xi_max]. Passing
/// xi_max <= 0 activates the automatic bound (doubling until the right-edge
/// density drops below 1e-8); eta <= 0 selects the default smoothing.
DensityEstimate spectral_density(const ChannelModel& model, double xi_max,
                                 int points, double eta,
                                 const PipelineConfig& cfg);

/// Like spectral_density, but solver failures at individual grid points are
/// collected into `failed_points` (density 0 there) instead of aborting the
/// whole grid.
DensityEstimate spectral_density_tolerant(const ChannelModel& model,
                                          double xi_max, int points,
                                          double eta,
                                          const PipelineConfig& cfg,
                                          std::vector<double>& failed_points);

/// Isotropic mutual information in nats per receive antenna:
/// trapezoid integral of log(1 + P xi) against the density. Mass at zero
/// contributes nothing.
double mutual_information(const DensityEstimate& density, double power);

struct MutualInfoCurve {
  std::vector<std::pair<double, double>> points;  // (P, nats per antenna)
};

struct CurveOptions {
  double xi_max = 0.0;  // auto
  int points = 800;
  double eta = 0.0;  // default
};

MutualInfoCurve mutual_info_curve(const ChannelModel& model,
                                  const std::vector<double>& powers,
                                  const PipelineConfig& cfg,
                                  const CurveOptions& opts = {});

/// The n = 1 classical Kronecker baseline: a single unit-variance circular
/// block with the given squared-correlation laws.
MutualInfoCurve classical_kronecker_reference(const ScalarMeasure& r2,
                                              const ScalarMeasure& t2,
                                              const std::vector<double>& powers,
                                              const PipelineConfig& cfg,
                                              const CurveOptions& opts = {});

}  // namespace ovkron
