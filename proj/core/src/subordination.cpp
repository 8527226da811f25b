#include "ovkron/subordination.hpp"

#include <cmath>
#include <cstdio>
#include <utility>

namespace ovkron {

namespace {

constexpr double kDampingFloor = 1.0 / 1024.0;
constexpr int kHalfPlaneRetries = 6;

struct DiagOps {
  using Value = ComplexVector;

  static Value inverse(const Value& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i)
      if (v[i] == Complex(0.0, 0.0))
        throw DomainError("subordination: singular diagonal value");
    return v.cwiseInverse();
  }
  static double norm(const Value& v) { return v.cwiseAbs().maxCoeff(); }
  static bool in_hplus(const Value& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i)
      if (!(v[i].imag() > 0.0)) return false;
    return true;
  }
  static Value eval(const MatrixCauchyMap& g, const Value& v,
                    EvalContext* ctx) {
    return g.eval_diag_extended(v, ctx);
  }
  static Value mul(const Value& a, const Value& b) {
    return a.cwiseProduct(b);
  }
};

struct DenseOps {
  using Value = ComplexMatrix;

  static Value inverse(const Value& v) { return ovkron::inverse(v); }
  static double norm(const Value& v) { return max_abs(v); }
  static bool in_hplus(const Value& v) { return half_plane_margin(v) > 0.0; }
  static Value eval(const MatrixCauchyMap& g, const Value& v,
                    EvalContext* ctx) {
    return g.eval_extended(v, ctx);
  }
  static Value mul(const Value& a, const Value& b) { return a * b; }
};

/// Generic damped Picard iteration. `step` maps the current iterate to the
/// next one; the iterate must stay in the upper half-plane.
template <typename Ops, typename StepFn>
std::pair<typename Ops::Value, SolveReport> damped_fixed_point(
    StepFn&& step, typename Ops::Value w, const FixedPointConfig& cfg,
    const char* kind) {
  using Value = typename Ops::Value;
  SolveReport report;
  report.kind = kind;
  report.damping_initial = cfg.damping;

  double delta = cfg.damping;
  double prev_res = std::numeric_limits<double>::infinity();
  int increases = 0;
  int decreases = 0;

  for (int m = 0; m < cfg.max_iterations; ++m) {
    Value f = step(w);
    double res = Ops::norm(Value(f - w)) / std::max(1.0, Ops::norm(w));
    report.iterations = m + 1;
    report.residual = res;
    if (res <= cfg.tolerance) {
      report.converged = true;
      report.damping_final = delta;
      if (cfg.logger) cfg.logger(report);
      return {std::move(w), report};
    }

    // Oscillation control: halve on repeated increases, slowly restore on
    // sustained decrease.
    if (res > prev_res) {
      decreases = 0;
      if (++increases >= 2) {
        delta = std::max(delta / 2.0, kDampingFloor);
        ++report.damping_halvings;
        increases = 0;
      }
    } else {
      increases = 0;
      if (++decreases >= 8) {
        delta = std::min(delta * 2.0, cfg.damping);
        decreases = 0;
      }
    }
    prev_res = res;

    double step_delta = delta;
    Value w_next = w + step_delta * (f - w);
    int retries = 0;
    while (!Ops::in_hplus(w_next)) {
      if (++retries > kHalfPlaneRetries)
        throw HalfPlaneViolationError(
            "subordination: iterate left the upper half-plane (invalid "
            "transform pair?)");
      step_delta /= 2.0;
      ++report.damping_halvings;
      w_next = w + step_delta * (f - w);
    }
    if (retries > 0) delta = step_delta;
    w = std::move(w_next);
  }

  report.damping_final = delta;
  if (cfg.logger) cfg.logger(report);
  throw NonConvergenceError(report);
}

template <typename Ops>
std::pair<typename Ops::Value, SolveReport> additive_solve(
    const MatrixCauchyMap& g_x, const MatrixCauchyMap& g_y,
    const typename Ops::Value& b, const FixedPointConfig& cfg,
    EvalContext* ctx, const typename Ops::Value* initial) {
  using Value = typename Ops::Value;
  if (!Ops::in_hplus(b))
    throw DomainError("additive_subordinator: B must be in H+");
  Value w0 = (initial && initial->size() == b.size() && Ops::in_hplus(*initial))
                 ? *initial
                 : b;
  auto step = [&](const Value& w) -> Value {
    Value rx = Ops::inverse(Ops::eval(g_x, w, ctx)) - w;
    Value arg = rx + b;
    Value ry = Ops::inverse(Ops::eval(g_y, arg, ctx)) - arg;
    return Value(ry + b);
  };
  return damped_fixed_point<Ops>(step, std::move(w0), cfg, "additive");
}

template <typename Ops>
typename Ops::Value h_of(const MatrixCauchyMap& g,
                         const typename Ops::Value& v, EvalContext* ctx) {
  if constexpr (std::is_same_v<typename Ops::Value, ComplexVector>) {
    // Measure-backed maps expose a cancellation-free h; the generic form
    // V^{-1} - G(V^{-1})^{-1} loses small shifts when V^{-1} is large.
    if (g.has_native_h()) return g.eval_h_diag(v, ctx);
  }
  typename Ops::Value vinv = Ops::inverse(v);
  return typename Ops::Value(vinv - Ops::inverse(Ops::eval(g, vinv, ctx)));
}

// Coordinates carrying no randomness cancel to an exact zero in h, which
// would make the next inversion singular. Nudging them into the open upper
// half-plane keeps the iteration defined; the final assembly still returns
// the exact free resolvent at such coordinates because the closing h_Y
// factor vanishes there.
inline void floor_degenerate_entries(ComplexVector& h) {
  double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < h.size(); ++i)
    if (std::abs(h[i]) < 1e-100) h[i] = Complex(0.0, 1e-8 * scale);
}
inline void floor_degenerate_entries(ComplexMatrix&) {}

/// Solve at the reflected base point btilde = (1/conj(zeta)) I in H+ and
/// assemble G_{XY}(zeta I) = (zeta I - zeta (h_Y(w) w)^*)^{-1}.
template <typename Ops>
std::tuple<typename Ops::Value, typename Ops::Value, SolveReport>
multiplicative_solve(const MatrixCauchyMap& g_x, const MatrixCauchyMap& g_y,
                     Complex zeta, const typename Ops::Value& btilde,
                     const FixedPointConfig& cfg, EvalContext* ctx,
                     const typename Ops::Value* initial) {
  using Value = typename Ops::Value;
  if (!(zeta.imag() > 0.0))
    throw DomainError("multiplicative_subordinator: Im(zeta) must be > 0");
  Value w0 =
      (initial && initial->size() == btilde.size() && Ops::in_hplus(*initial))
          ? *initial
          : btilde;
  auto step = [&](const Value& w) -> Value {
    Value hy = h_of<Ops>(g_y, w, ctx);
    floor_degenerate_entries(hy);
    Value u = Ops::mul(hy, btilde);
    Value hx = h_of<Ops>(g_x, u, ctx);
    floor_degenerate_entries(hx);
    return Ops::mul(btilde, hx);
  };
  auto [omega, report] =
      damped_fixed_point<Ops>(step, std::move(w0), cfg, "multiplicative");
  report.note = "product_hypotheses_unverified";

  Value hy_end = h_of<Ops>(g_y, omega, ctx);
  Value k = Ops::mul(hy_end, omega);
  if constexpr (std::is_same_v<Value, ComplexVector>) {
    Value rhs = (zeta * ComplexVector::Ones(k.size()) - zeta * k.conjugate());
    return {Ops::inverse(rhs), omega, report};
  } else {
    Value rhs = zeta * ComplexMatrix::Identity(k.rows(), k.cols()) -
                zeta * k.adjoint();
    return {Ops::inverse(rhs), omega, report};
  }
}

}  // namespace

std::string SolveReport::to_log_line() const {
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "solve=%s iters=%d residual=%.6e converged=%d "
                "damping_initial=%g damping_final=%g halvings=%d",
                kind.c_str(), iterations, residual, converged ? 1 : 0,
                damping_initial, damping_final, damping_halvings);
  std::string line(buf);
  if (!note.empty()) line += " note=" + note;
  return line;
}

void FixedPointConfig::validate() const {
  if (!(tolerance > 0.0))
    throw DomainError("FixedPointConfig: tolerance must be > 0");
  if (max_iterations < 1)
    throw DomainError("FixedPointConfig: max_iterations must be >= 1");
  if (!(damping > 0.0) || damping > 1.0)
    throw DomainError("FixedPointConfig: damping must be in (0, 1]");
}

AdditiveResult additive_subordinator(const MatrixCauchyMap& g_x,
                                     const MatrixCauchyMap& g_y,
                                     const ComplexMatrix& b,
                                     const FixedPointConfig& cfg,
                                     EvalContext* ctx) {
  cfg.validate();
  if (g_x.dim() != g_y.dim() || g_x.dim() != b.rows())
    throw DomainError("additive_subordinator: dimension mismatch");
  if (g_x.has_diagonal_path() && g_y.has_diagonal_path() && is_diagonal(b)) {
    auto res = additive_subordinator_diag(g_x, g_y, b.diagonal(), cfg, ctx);
    return {ComplexMatrix(res.omega1.asDiagonal()),
            ComplexMatrix(res.g_sum.asDiagonal()), std::move(res.report)};
  }
  auto [omega, report] =
      additive_solve<DenseOps>(g_x, g_y, b, cfg, ctx, nullptr);
  ComplexMatrix g_sum = g_x.eval_extended(omega, ctx);
  return {std::move(omega), std::move(g_sum), std::move(report)};
}

AdditiveDiagResult additive_subordinator_diag(
    const MatrixCauchyMap& g_x, const MatrixCauchyMap& g_y,
    const ComplexVector& b, const FixedPointConfig& cfg, EvalContext* ctx,
    const ComplexVector* initial) {
  cfg.validate();
  if (g_x.dim() != g_y.dim() || g_x.dim() != b.size())
    throw DomainError("additive_subordinator: dimension mismatch");
  auto [omega, report] =
      additive_solve<DiagOps>(g_x, g_y, b, cfg, ctx, initial);
  ComplexVector g_sum = g_x.eval_diag_extended(omega, ctx);
  return {std::move(omega), std::move(g_sum), std::move(report)};
}

MultiplicativeResult multiplicative_subordinator(
    const MatrixCauchyMap& g_x, const MatrixCauchyMap& g_y, Complex zeta,
    const FixedPointConfig& cfg, EvalContext* ctx,
    const ComplexVector* initial) {
  cfg.validate();
  if (g_x.dim() != g_y.dim())
    throw DomainError("multiplicative_subordinator: dimension mismatch");
  if (g_x.has_diagonal_path() && g_y.has_diagonal_path()) {
    auto res =
        multiplicative_subordinator_diag(g_x, g_y, zeta, cfg, ctx, initial);
    return {ComplexMatrix(res.g.asDiagonal()),
            ComplexMatrix(res.omega2.asDiagonal()), std::move(res.report)};
  }
  Eigen::Index dim = g_x.dim();
  ComplexMatrix btilde =
      (1.0 / std::conj(zeta)) * ComplexMatrix::Identity(dim, dim);
  ComplexMatrix w0;
  const ComplexMatrix* w0p = nullptr;
  if (initial) {
    w0 = ComplexMatrix(initial->asDiagonal());
    w0p = &w0;
  }
  auto [g, omega, report] = multiplicative_solve<DenseOps>(
      g_x, g_y, zeta, btilde, cfg, ctx, w0p);
  return {std::move(g), std::move(omega), std::move(report)};
}

MultiplicativeDiagResult multiplicative_subordinator_diag(
    const MatrixCauchyMap& g_x, const MatrixCauchyMap& g_y, Complex zeta,
    const FixedPointConfig& cfg, EvalContext* ctx,
    const ComplexVector* initial) {
  cfg.validate();
  if (g_x.dim() != g_y.dim())
    throw DomainError("multiplicative_subordinator: dimension mismatch");
  if (!g_x.has_diagonal_path() || !g_y.has_diagonal_path())
    throw DomainError(
        "multiplicative_subordinator_diag: both transforms need a diagonal "
        "path");
  ComplexVector btilde =
      ComplexVector::Constant(g_x.dim(), 1.0 / std::conj(zeta));
  auto [g, omega, report] = multiplicative_solve<DiagOps>(
      g_x, g_y, zeta, btilde, cfg, ctx, initial);
  return {std::move(g), std::move(omega), std::move(report)};
}

MatrixCauchyMap free_additive_convolution(MatrixCauchyMap g_x,
                                          MatrixCauchyMap g_y,
                                          FixedPointConfig cfg) {
  cfg.validate();
  if (g_x.dim() != g_y.dim())
    throw DomainError("free_additive_convolution: dimension mismatch");
  Eigen::Index dim = g_x.dim();
  bool diag = g_x.has_diagonal_path() && g_y.has_diagonal_path();
  // Warm-start key shared by all copies of the closure.
  auto key = std::make_shared<int>(0);

  if (diag) {
    auto eval = [g_x, g_y, cfg, key](const ComplexVector& b,
                                     EvalContext* ctx) -> ComplexVector {
      const ComplexVector* warm = nullptr;
      if (ctx) {
        auto it = ctx->warm.find(key.get());
        if (it != ctx->warm.end()) warm = &it->second;
      }
      AdditiveDiagResult res = [&] {
        if (warm) {
          try {
            return additive_subordinator_diag(g_x, g_y, b, cfg, ctx, warm);
          } catch (const Error&) {
            // Warm start led the iteration astray; retry cold.
          }
        }
        return additive_subordinator_diag(g_x, g_y, b, cfg, ctx, nullptr);
      }();
      if (ctx) ctx->warm[key.get()] = res.omega1;
      return res.g_sum;
    };
    return MatrixCauchyMap::diagonal(dim, std::move(eval));
  }

  auto eval = [g_x, g_y, cfg](const ComplexMatrix& b,
                              EvalContext* ctx) -> ComplexMatrix {
    return additive_subordinator(g_x, g_y, b, cfg, ctx).g_sum;
  };
  return MatrixCauchyMap::dense(dim, std::move(eval));
}

}  // namespace ovkron
