#include "ovkron/opval.hpp"

#include <algorithm>
#include <cmath>

namespace ovkron {

namespace {

bool all_imag_positive(const ComplexVector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (!(v[i].imag() > 0.0)) return false;
  return true;
}

bool all_imag_negative(const ComplexVector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (!(v[i].imag() < 0.0)) return false;
  return true;
}

void check_dim(Eigen::Index expected, Eigen::Index got, const char* who) {
  if (expected != got)
    throw DomainError(std::string(who) + ": dimension mismatch");
}

}  // namespace

MatrixCauchyMap MatrixCauchyMap::dense(Eigen::Index dim, DenseEval eval,
                                       bool diagonal_preserving,
                                       bool analytic_everywhere) {
  MatrixCauchyMap m;
  m.dim_ = dim;
  m.dense_ = std::move(eval);
  m.diagonal_preserving_ = diagonal_preserving;
  m.analytic_everywhere_ = analytic_everywhere;
  return m;
}

MatrixCauchyMap MatrixCauchyMap::diagonal(Eigen::Index dim, DiagEval eval,
                                          bool analytic_everywhere) {
  MatrixCauchyMap m;
  m.dim_ = dim;
  m.diag_ = std::move(eval);
  m.diagonal_preserving_ = true;
  m.analytic_everywhere_ = analytic_everywhere;
  return m;
}

MatrixCauchyMap MatrixCauchyMap::dense_and_diagonal(Eigen::Index dim,
                                                    DenseEval dense,
                                                    DiagEval diag,
                                                    bool analytic_everywhere) {
  MatrixCauchyMap m;
  m.dim_ = dim;
  m.dense_ = std::move(dense);
  m.diag_ = std::move(diag);
  m.diagonal_preserving_ = true;
  m.analytic_everywhere_ = analytic_everywhere;
  return m;
}

MatrixCauchyMap MatrixCauchyMap::from_scalar(
    std::function<Complex(Complex)> g) {
  return diagonal(
      1,
      [g = std::move(g)](const ComplexVector& b, EvalContext*) {
        ComplexVector out(1);
        out[0] = g(b[0]);
        return out;
      },
      /*analytic_everywhere=*/true);
}

ComplexMatrix MatrixCauchyMap::operator()(const ComplexMatrix& b,
                                          EvalContext* ctx) const {
  check_dim(dim_, b.rows(), "MatrixCauchyMap");
  if (!in_upper_half_plane(b))
    throw DomainError("MatrixCauchyMap: argument not in H+");
  if (!dense_) {
    if (!is_diagonal(b))
      throw DomainError(
          "MatrixCauchyMap: map is diagonal-only but argument is not diagonal");
    return eval_diag(b.diagonal(), ctx).asDiagonal();
  }
  return dense_(b, ctx);
}

ComplexVector MatrixCauchyMap::eval_diag(const ComplexVector& b,
                                         EvalContext* ctx) const {
  check_dim(dim_, b.size(), "MatrixCauchyMap");
  if (!all_imag_positive(b))
    throw DomainError("MatrixCauchyMap: diagonal argument not in H+");
  if (diag_) return diag_(b, ctx);
  ComplexMatrix out = dense_(ComplexMatrix(b.asDiagonal()), ctx);
  return out.diagonal();
}

ComplexMatrix MatrixCauchyMap::eval_extended(const ComplexMatrix& b,
                                             EvalContext* ctx) const {
  check_dim(dim_, b.rows(), "MatrixCauchyMap");
  if (!dense_ || (diag_ && is_diagonal(b)))
    return eval_diag_extended(b.diagonal(), ctx).asDiagonal();
  if (analytic_everywhere_) return dense_(b, ctx);
  if (in_upper_half_plane(b)) return dense_(b, ctx);
  if (in_lower_half_plane(b)) return dense_(b.adjoint(), ctx).adjoint();
  throw DomainError("MatrixCauchyMap: argument in neither half-plane");
}

ComplexVector MatrixCauchyMap::eval_diag_extended(const ComplexVector& b,
                                                  EvalContext* ctx) const {
  check_dim(dim_, b.size(), "MatrixCauchyMap");
  const auto run = [&](const ComplexVector& v) {
    if (diag_) return diag_(v, ctx);
    ComplexMatrix out = dense_(ComplexMatrix(v.asDiagonal()), ctx);
    return ComplexVector(out.diagonal());
  };
  if (analytic_everywhere_) return run(b);
  if (all_imag_positive(b)) return run(b);
  if (all_imag_negative(b)) return run(b.conjugate()).conjugate();
  throw DomainError(
      "MatrixCauchyMap: diagonal argument mixes half-planes and map is not "
      "entrywise analytic");
}

ComplexMatrix extend_reflect(const MatrixCauchyMap& g, const ComplexMatrix& b,
                             EvalContext* ctx) {
  if (!in_lower_half_plane(b))
    throw DomainError("extend_reflect: argument must be in H-");
  return g(b.adjoint(), ctx).adjoint();
}

ComplexMatrix cauchy_r_times_unit(const ScalarMeasure& mu, Eigen::Index k,
                                  Eigen::Index n, const ComplexMatrix& b) {
  Eigen::Index dim = 2 * n;
  check_dim(dim, b.rows(), "cauchy_r_times_unit");
  if (k < 0 || k >= dim)
    throw DomainError("cauchy_r_times_unit: coordinate index out of range");
  ComplexMatrix binv = inverse(b);
  Complex c = binv(k, k);
  if (std::abs(c) == 0.0)
    throw DomainError(
        "cauchy_r_times_unit: [B^-1]_kk vanishes (degenerate point)");
  Complex g = cauchy_of_measure_extended(mu, 1.0 / c);
  ComplexMatrix out = binv;
  out.noalias() += ((g - c) / (c * c)) * (binv.col(k) * binv.row(k));
  return out;
}

MatrixCauchyMap unit_coordinate_map(ScalarMeasure mu, Eigen::Index k,
                                    Eigen::Index n) {
  // At diagonal B the formula collapses: coordinate k becomes G_mu(b_k), the
  // rest stay 1/b_i.
  auto diag = [mu, k](const ComplexVector& b, EvalContext*) {
    ComplexVector out = b.cwiseInverse();
    out[k] = cauchy_of_measure_extended(mu, b[k]);
    return out;
  };
  auto dense = [mu = std::move(mu), k, n](const ComplexMatrix& b,
                                          EvalContext*) {
    return cauchy_r_times_unit(mu, k, n, b);
  };
  return MatrixCauchyMap::dense_and_diagonal(2 * n, std::move(dense),
                                             std::move(diag),
                                             /*analytic_everywhere=*/true);
}

ComplexVector cauchy_q_diagonal(const std::vector<ScalarMeasure>& r2,
                                const std::vector<ScalarMeasure>& t2,
                                const ComplexVector& d) {
  Eigen::Index n = static_cast<Eigen::Index>(r2.size());
  if (t2.size() != r2.size())
    throw DomainError("cauchy_q_diagonal: measure lists differ in length");
  check_dim(2 * n, d.size(), "cauchy_q_diagonal");
  ComplexVector out(2 * n);
  for (Eigen::Index i = 0; i < n; ++i)
    out[i] = cauchy_of_measure_extended(r2[static_cast<size_t>(i)], d[i]);
  for (Eigen::Index i = 0; i < n; ++i)
    out[n + i] = cauchy_of_measure_extended(t2[static_cast<size_t>(i)], d[n + i]);
  return out;
}

ComplexMatrix cauchy_q_diagonal(const std::vector<ScalarMeasure>& r2,
                                const std::vector<ScalarMeasure>& t2,
                                const ComplexMatrix& d) {
  if (!is_diagonal(d))
    throw DomainError("cauchy_q_diagonal: argument must be diagonal");
  return cauchy_q_diagonal(r2, t2, ComplexVector(d.diagonal())).asDiagonal();
}

MatrixCauchyMap correlation_corner_map(std::vector<ScalarMeasure> r2,
                                       std::vector<ScalarMeasure> t2) {
  Eigen::Index n = static_cast<Eigen::Index>(r2.size());
  auto eval = [r2, t2](const ComplexVector& d, EvalContext*) {
    return cauchy_q_diagonal(r2, t2, d);
  };
  auto h_eval = [r2 = std::move(r2), t2 = std::move(t2)](
                    const ComplexVector& b, EvalContext*) {
    Eigen::Index n2 = static_cast<Eigen::Index>(r2.size());
    ComplexVector out(2 * n2);
    for (Eigen::Index i = 0; i < n2; ++i)
      out[i] = measure_h_transform(r2[static_cast<size_t>(i)], b[i]);
    for (Eigen::Index i = 0; i < n2; ++i)
      out[n2 + i] = measure_h_transform(t2[static_cast<size_t>(i)], b[n2 + i]);
    return out;
  };
  return MatrixCauchyMap::diagonal(2 * n, std::move(eval),
                                   /*analytic_everywhere=*/true)
      .with_native_h(std::move(h_eval));
}

ComplexVector cauchy_xhat_kl(const RealVector& d,
                             const std::vector<Eigen::Index>& pi,
                             const ComplexVector& j) {
  Eigen::Index n = d.size();
  if (static_cast<Eigen::Index>(pi.size()) != n)
    throw DomainError("cauchy_xhat_kl: permutation size mismatch");
  check_dim(2 * n, j.size(), "cauchy_xhat_kl");
  std::vector<Eigen::Index> pinv = inverse_permutation(pi);

  ComplexVector out(2 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double d2 = d[i] * d[i];
    if (d2 == 0.0) {
      out[i] = 1.0 / j[i];
      continue;
    }
    Complex j1 = j[i];
    Complex j2 = j[n + pi[static_cast<size_t>(i)]];
    out[i] = (j2 / d2) * cauchy_mp_extended(j1 * j2 / d2);
  }
  for (Eigen::Index q = 0; q < n; ++q) {
    Eigen::Index p = pinv[static_cast<size_t>(q)];
    double d2 = d[p] * d[p];
    if (d2 == 0.0) {
      out[n + q] = 1.0 / j[n + q];
      continue;
    }
    Complex j1 = j[p];
    Complex j2 = j[n + q];
    out[n + q] = (j1 / d2) * cauchy_mp_extended(j1 * j2 / d2);
  }
  return out;
}

MatrixCauchyMap circular_block_map(RealVector d,
                                   std::vector<Eigen::Index> pi) {
  Eigen::Index n = d.size();
  auto eval = [d = std::move(d), pi = std::move(pi)](const ComplexVector& j,
                                                     EvalContext*) {
    return cauchy_xhat_kl(d, pi, j);
  };
  return MatrixCauchyMap::diagonal(2 * n, std::move(eval),
                                   /*analytic_everywhere=*/true);
}

ComplexMatrix r_transform(const MatrixCauchyMap& g, const ComplexMatrix& b,
                          EvalContext* ctx) {
  return inverse(g(b, ctx)) - b;
}

ComplexMatrix h_transform(const MatrixCauchyMap& g, const ComplexMatrix& b,
                          EvalContext* ctx) {
  ComplexMatrix binv = inverse(b);
  return binv - inverse(g.eval_extended(binv, ctx));
}

MatrixCauchyMap zero_variable_map(Eigen::Index dim) {
  auto dense = [](const ComplexMatrix& b, EvalContext*) { return inverse(b); };
  auto diag = [](const ComplexVector& b, EvalContext*) {
    return ComplexVector(b.cwiseInverse());
  };
  return MatrixCauchyMap::dense_and_diagonal(dim, dense, diag,
                                             /*analytic_everywhere=*/true);
}

MatrixCauchyMap deterministic_diagonal_map(ComplexVector c) {
  Eigen::Index dim = c.size();
  auto dense = [c](const ComplexMatrix& b, EvalContext*) {
    return inverse(ComplexMatrix(b - ComplexMatrix(c.asDiagonal())));
  };
  auto diag = [c](const ComplexVector& b, EvalContext*) {
    return ComplexVector((b - c).cwiseInverse());
  };
  return MatrixCauchyMap::dense_and_diagonal(dim, std::move(dense),
                                             std::move(diag),
                                             /*analytic_everywhere=*/true);
}

std::vector<Eigen::Index> identity_permutation(Eigen::Index n) {
  std::vector<Eigen::Index> pi(static_cast<size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) pi[static_cast<size_t>(i)] = i;
  return pi;
}

std::vector<Eigen::Index> inverse_permutation(
    const std::vector<Eigen::Index>& pi) {
  std::vector<Eigen::Index> inv(pi.size(), -1);
  for (size_t i = 0; i < pi.size(); ++i) {
    Eigen::Index target = pi[i];
    if (target < 0 || target >= static_cast<Eigen::Index>(pi.size()) ||
        inv[static_cast<size_t>(target)] != -1)
      throw DomainError("inverse_permutation: not a permutation");
    inv[static_cast<size_t>(target)] = static_cast<Eigen::Index>(i);
  }
  return inv;
}

}  // namespace ovkron
