// ovkron: asymptotic spectra and isotropic mutual information of
// operator-valued Kronecker channel models, with a Monte Carlo oracle.
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ovkron/config.hpp"
#include "ovkron/io.hpp"
#include "ovkron/mc.hpp"
#include "ovkron/parallel.hpp"
#include "ovkron/version.hpp"

namespace {

using namespace ovkron;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;

struct CommonOptions {
  std::string model_path;
  std::string out_path;
  int jobs = 0;  // 0 = all cores
  double tolerance = 1e-12;
  int max_iterations = 10000;
  bool verbose_solves = false;
  bool dump_normalized = false;
};

std::mutex g_log_mutex;

void add_common(CLI::App* cmd, CommonOptions& opts, bool needs_model = true) {
  if (needs_model)
    cmd->add_option("--model", opts.model_path, "model config (JSON)")
        ->required();
  cmd->add_option("--jobs", opts.jobs,
                  "worker threads (0 = all cores; env OVKRON_JOBS overrides)");
  cmd->add_option("--tolerance", opts.tolerance, "fixed point tolerance");
  cmd->add_option("--max-iterations", opts.max_iterations,
                  "fixed point iteration cap");
  cmd->add_flag("--verbose-solves", opts.verbose_solves,
                "log one key=value line per subordination solve");
  if (needs_model)
    cmd->add_flag("--dump-normalized", opts.dump_normalized,
                  "print the normalized model config and exit");
}

PipelineConfig pipeline_config(const CommonOptions& opts) {
  PipelineConfig cfg;
  cfg.fixed_point.tolerance = opts.tolerance;
  cfg.fixed_point.max_iterations = opts.max_iterations;
  if (opts.verbose_solves)
    cfg.fixed_point.logger = [](const SolveReport& r) {
      std::lock_guard<std::mutex> lock(g_log_mutex);
      std::cerr << r.to_log_line() << "\n";
    };
  int jobs = opts.jobs;
  if (const char* env = std::getenv("OVKRON_JOBS")) jobs = std::atoi(env);
  cfg.jobs = resolve_jobs(jobs);
  return cfg;
}

std::vector<double> parse_power_grid(const std::string& text) {
  std::vector<std::string> parts;
  size_t pos = 0;
  while (true) {
    size_t next = text.find(':', pos);
    parts.push_back(text.substr(pos, next - pos));
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  bool log = false;
  if (parts.size() == 4 && parts[3] == "log") {
    log = true;
    parts.pop_back();
  }
  if (parts.size() != 3)
    throw ConfigError("power grid must be start:stop:count[:log]");
  double start = std::stod(parts[0]);
  double stop = std::stod(parts[1]);
  int count = std::stoi(parts[2]);
  if (!(start > 0.0))
    throw ConfigError("power grid start must be positive");
  if (count < 1 || stop < start)
    throw ConfigError("power grid needs stop >= start and count >= 1");
  std::vector<double> grid;
  if (count == 1) return {start};
  for (int i = 0; i < count; ++i) {
    double t = static_cast<double>(i) / (count - 1);
    grid.push_back(log ? start * std::pow(stop / start, t)
                       : start + t * (stop - start));
  }
  return grid;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot open output file: " + path);
  return os;
}

// Rank-one factorization of the entrywise variance matrix for the n = 1
// classical baseline; fails when the covariance is not separable.
std::pair<ScalarMeasure, ScalarMeasure> classical_measures(
    const ChannelModel& m) {
  RealMatrix sv(m.n_r, m.n_t);
  for (Eigen::Index k = 0; k < m.n_r; ++k)
    for (Eigen::Index l = 0; l < m.n_t; ++l) sv(k, l) = m.entry_variance(k, l);
  Eigen::JacobiSVD<RealMatrix> svd(sv, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.singularValues().size() > 1 &&
      svd.singularValues()[1] > 1e-10 * svd.singularValues()[0])
    throw ConfigError(
        "--classical requires a separable (rank-one) entry variance matrix");
  RealVector a = svd.matrixU().col(0) * std::sqrt(svd.singularValues()[0]);
  RealVector b = svd.matrixV().col(0) * std::sqrt(svd.singularValues()[0]);
  if (a[0] < 0.0) {
    a = -a;
    b = -b;
  }
  std::vector<ScalarMeasure::Atom> ra, ta;
  for (Eigen::Index k = 0; k < m.n_r; ++k)
    ra.push_back({a[k], 1.0 / static_cast<double>(m.n_r)});
  for (Eigen::Index l = 0; l < m.n_t; ++l)
    ta.push_back({b[l], 1.0 / static_cast<double>(m.n_t)});
  return {ScalarMeasure::from_atoms(std::move(ra)),
          ScalarMeasure::from_atoms(std::move(ta))};
}

int run_spectrum(const CommonOptions& opts, int points, const std::string& eta,
                 const std::string& xmax) {
  ChannelModel model = build_model(load_model_config(opts.model_path));
  if (opts.dump_normalized) {
    std::cout << dump_normalized(model);
    return kExitOk;
  }
  PipelineConfig cfg = pipeline_config(opts);
  double eta_v = (eta == "auto") ? 0.0 : std::stod(eta);
  double xmax_v = (xmax == "auto") ? 0.0 : std::stod(xmax);

  std::vector<double> failed;
  DensityEstimate f =
      spectral_density_tolerant(model, xmax_v, points, eta_v, cfg, failed);
  std::ofstream os = open_out(opts.out_path);
  write_density_csv(os, f, normalized_params_line(model));
  if (f.negative_overshoots > 0)
    std::cerr << "warning: " << f.negative_overshoots
              << " grid points clamped from below -1e-6 (branch or "
                 "convergence problem)\n";
  if (!failed.empty()) {
    for (double xi : failed)
      os << "# FAILED solver non-convergence at xi=" << xi << "\n";
    std::cerr << "solver failed at " << failed.size() << " grid points\n";
    return kExitNumerical;
  }
  return kExitOk;
}

int run_mutualinfo(const CommonOptions& opts, const std::string& power,
                   int points, const std::string& eta, const std::string& xmax,
                   bool classical) {
  ChannelModel model = build_model(load_model_config(opts.model_path));
  if (opts.dump_normalized) {
    std::cout << dump_normalized(model);
    return kExitOk;
  }
  PipelineConfig cfg = pipeline_config(opts);
  std::vector<double> powers = parse_power_grid(power);
  CurveOptions copts;
  copts.points = points;
  copts.eta = (eta == "auto") ? 0.0 : std::stod(eta);
  copts.xi_max = (xmax == "auto") ? 0.0 : std::stod(xmax);

  MutualInfoCurve curve = mutual_info_curve(model, powers, cfg, copts);
  std::optional<MutualInfoCurve> baseline;
  if (classical) {
    auto [r2, t2] = classical_measures(model);
    baseline = classical_kronecker_reference(r2, t2, powers, cfg, copts);
  }
  std::ofstream os = open_out(opts.out_path);
  write_curve_csv(os, curve, normalized_params_line(model),
                  baseline ? &*baseline : nullptr);
  return kExitOk;
}

int run_mc(const CommonOptions& opts, const std::string& out_hist,
           const std::string& out_mi, Eigen::Index block_size, int trials,
           std::uint64_t seed, int bins, const std::string& power) {
  ChannelModel model = build_model(load_model_config(opts.model_path));
  if (opts.dump_normalized) {
    std::cout << dump_normalized(model);
    return kExitOk;
  }
  PipelineConfig cfg = pipeline_config(opts);
  if (trials < 1) throw ConfigError("mc: trials must be >= 1");

  McConfig mc;
  mc.model = model;
  mc.block_size = block_size;
  mc.trials = trials;
  mc.seed = seed;
  mc.jobs = cfg.jobs;
  auto samples = sample_channel(mc);
  auto spectra = trial_eigenvalues(samples, cfg.jobs);

  std::string params = normalized_params_line(model);
  {
    std::ofstream os = open_out(out_hist);
    write_histogram_csv(os, empirical_spectrum(spectra, bins), params);
  }
  {
    std::vector<std::pair<double, McMutualInfo>> rows;
    for (double p : parse_power_grid(power))
      rows.emplace_back(p, mc_mutual_info(spectra, p));
    std::ofstream os = open_out(out_mi);
    write_mc_info_csv(os, rows, params);
  }
  return kExitOk;
}

int run_gamma_study(const CommonOptions& opts, int n, double gamma, int trials,
                    std::uint64_t seed) {
  if (!(gamma > 0.0) || !(gamma < 1.0))
    throw ConfigError("gamma-study: the bounds assume 0 < gamma < 1");
  if (n < 1 || trials < 1)
    throw ConfigError("gamma-study: n and trials must be >= 1");

  std::vector<ReportRow> rows;
  for (int i = 0; i < trials; ++i) {
    Rng rng(seed, static_cast<std::uint64_t>(i));
    ComplexMatrix a(n, n);
    for (Eigen::Index c = 0; c < n; ++c)
      for (Eigen::Index r = 0; r < n; ++r) a(r, c) = rng.complex_gaussian();
    BoundReport bulk = gamma_bulk_bound_check(a, gamma);
    BoundReport top = gamma_top_singular_check(a, gamma);
    rows.push_back({"bulk_bound_" + std::to_string(i), bulk.lhs, bulk.rhs});
    rows.push_back({"top_singular_bound_" + std::to_string(i), top.lhs, top.rhs});
    if (!bulk.holds() || !top.holds())
      throw Error("gamma-study: a proved inequality failed (implementation "
                  "bug)");
  }

  // Large-gamma decay and moderate-gamma Monte Carlo agreement of the joint
  // moments, on a fixed 3x3 full-rank instance.
  Rng rng(seed, 0xabcdef);
  RealMatrix r(3, 3), t(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      r(i, j) = rng.gaussian();
      t(i, j) = rng.gaussian();
    }
  Eigen::MatrixXi ex = Eigen::MatrixXi::Zero(3, 3);
  ex(0, 1) = 1;
  ex(2, 0) = 2;
  MomentComparison decay = gamma_infinity_moment(r, t, ex, 100.0, 2, seed);
  rows.push_back({"infinity_moment_decay_gamma100",
                  std::abs(decay.closed_form), 1e-8});
  MomentComparison agree = gamma_infinity_moment(r, t, ex, 1.0, 20000, seed);
  rows.push_back({"infinity_moment_mc_err_re",
                  std::abs(agree.mc_estimate.real() - agree.closed_form.real()),
                  3.0 * agree.std_error_re});
  rows.push_back({"infinity_moment_mc_err_im",
                  std::abs(agree.mc_estimate.imag() - agree.closed_form.imag()),
                  3.0 * agree.std_error_im});

  std::ofstream os = open_out(opts.out_path);
  write_report_csv(os, rows,
                   "{\"n\":" + std::to_string(n) +
                       ",\"gamma\":" + std::to_string(gamma) +
                       ",\"trials\":" + std::to_string(trials) +
                       ",\"seed\":" + std::to_string(seed) + "}");
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"operator-valued Kronecker channel models: asymptotic "
               "spectra, mutual information, Monte Carlo validation"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  CommonOptions spec_opts, mi_opts, mc_opts, gamma_opts;

  auto* spectrum = app.add_subcommand("spectrum", "spectral density CSV");
  int spec_points = 500;
  std::string spec_eta = "auto", spec_xmax = "auto";
  add_common(spectrum, spec_opts);
  spectrum->add_option("--out", spec_opts.out_path, "output CSV")->required();
  spectrum->add_option("--points", spec_points, "grid points");
  spectrum->add_option("--eta", spec_eta, "imaginary offset or 'auto'");
  spectrum->add_option("--xmax", spec_xmax, "grid upper edge or 'auto'");

  auto* mutualinfo =
      app.add_subcommand("mutualinfo", "mutual information curve CSV");
  std::string mi_power = "1:10:10";
  int mi_points = 800;
  std::string mi_eta = "auto", mi_xmax = "auto";
  bool mi_classical = false;
  add_common(mutualinfo, mi_opts);
  mutualinfo->add_option("--out", mi_opts.out_path, "output CSV")->required();
  mutualinfo->add_option("--power", mi_power, "power grid start:stop:count[:log]");
  mutualinfo->add_option("--points", mi_points, "density grid points");
  mutualinfo->add_option("--eta", mi_eta, "imaginary offset or 'auto'");
  mutualinfo->add_option("--xmax", mi_xmax, "grid upper edge or 'auto'");
  mutualinfo->add_flag("--classical", mi_classical,
                       "emit the n=1 classical Kronecker baseline alongside");

  auto* mc = app.add_subcommand("mc", "Monte Carlo spectrum and mutual info");
  std::string mc_hist, mc_mi;
  Eigen::Index mc_block = 500;
  int mc_trials = 20, mc_bins = 60;
  std::uint64_t mc_seed = 42;
  std::string mc_power = "1:10:2";
  add_common(mc, mc_opts);
  mc->add_option("--out-hist", mc_hist, "histogram CSV")->required();
  mc->add_option("--out-mi", mc_mi, "mutual information CSV")->required();
  mc->add_option("--block-size", mc_block, "per-operator dimension N");
  mc->add_option("--trials", mc_trials, "number of trials");
  mc->add_option("--seed", mc_seed, "master seed");
  mc->add_option("--bins", mc_bins, "histogram bins");
  mc->add_option("--power", mc_power, "power grid start:stop:count[:log]");

  auto* gamma = app.add_subcommand("gamma-study",
                                   "entrywise-exponential bound reports");
  int g_n = 100, g_trials = 50;
  double g_gamma = 0.01;
  std::uint64_t g_seed = 7;
  add_common(gamma, gamma_opts, /*needs_model=*/false);
  gamma->add_option("--out", gamma_opts.out_path, "report CSV")->required();
  gamma->add_option("--n", g_n, "matrix dimension");
  gamma->add_option("--gamma", g_gamma, "phase scale, in (0,1)");
  gamma->add_option("--trials", g_trials, "randomized instances");
  gamma->add_option("--seed", g_seed, "master seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (spectrum->parsed())
      return run_spectrum(spec_opts, spec_points, spec_eta, spec_xmax);
    if (mutualinfo->parsed())
      return run_mutualinfo(mi_opts, mi_power, mi_points, mi_eta, mi_xmax,
                            mi_classical);
    if (mc->parsed())
      return run_mc(mc_opts, mc_hist, mc_mi, mc_block, mc_trials, mc_seed,
                    mc_bins, mc_power);
    if (gamma->parsed())
      return run_gamma_study(gamma_opts, g_n, g_gamma, g_trials, g_seed);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const NonConvergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const HalfPlaneViolationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const StieltjesError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
