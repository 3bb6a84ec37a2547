// Acceptance gate: one PASS/FAIL line per criterion; exit code = #failures.
// Tolerances and runtime budgets are pinned here, next to each check.
#include <unistd.h>

#include <Eigen/Dense>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "nlos/analysis.hpp"
#include "nlos/forward.hpp"
#include "nlos/harness.hpp"
#include "nlos/io_csv.hpp"
#include "nlos/noise.hpp"

using namespace nlos;
namespace fs = std::filesystem;

namespace {

fs::path g_tmp;

std::string sci(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

fs::path write_config(const std::string& stem, const ScenarioConfig& c) {
  const fs::path p = g_tmp / (stem + ".ini");
  std::ofstream(p, std::ios::binary) << serialize_config(c);
  return p;
}

std::vector<double> random_vec(std::size_t n, std::uint64_t seed) {
  CounterRng rng{seed};
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = rng.normal(i);
  return v;
}

std::vector<cplx> random_cvec(std::size_t n, std::uint64_t seed) {
  CounterRng rng{seed};
  std::vector<cplx> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = {rng.normal(2 * i), rng.normal(2 * i + 1)};
  return v;
}

// Dense complex operator for oracle comparisons against Eigen.
struct DenseOp final : LinearOp {
  std::size_t nin = 0, nout = 0;
  std::vector<cplx> a;  // row-major nout × nin
  std::vector<cplx> b;
  double sign = 1.0;
  bool ambient = false;

  DenseOp(std::size_t ni, std::size_t no) : nin(ni), nout(no), a(ni * no), b(no) {}

  std::size_t input_size() const override { return nin; }
  std::size_t output_size() const override { return nout; }
  void apply(std::span<const double> t, std::span<cplx> out) const override {
    for (std::size_t i = 0; i < nout; ++i) {
      cplx s = 0.0;
      for (std::size_t j = 0; j < nin; ++j) s += a[i * nin + j] * t[j];
      out[i] = s;
    }
  }
  void adjoint(std::span<const cplx> w, std::span<cplx> out) const override {
    for (std::size_t j = 0; j < nin; ++j) {
      cplx s = 0.0;
      for (std::size_t i = 0; i < nout; ++i) s += std::conj(a[i * nin + j]) * w[i];
      out[j] = s;
    }
  }
  std::span<const cplx> offset() const override { return b; }
  bool has_ambient() const override { return ambient; }
  double mode_sign() const override { return sign; }
};

std::shared_ptr<DenseOp> random_op(std::size_t nin, std::size_t nout, std::uint64_t seed,
                                   double diag_boost = 0.0) {
  auto op = std::make_shared<DenseOp>(nin, nout);
  CounterRng rng{seed};
  for (std::size_t i = 0; i < op->a.size(); ++i)
    op->a[i] = {0.3 * rng.normal(2 * i), 0.3 * rng.normal(2 * i + 1)};
  for (std::size_t i = 0; i < nout && i < nin; ++i) op->a[i * nin + i] += diag_boost;
  return op;
}

FusionProblem identity_problem(std::size_t n) {
  FusionProblem p;
  p.obj = make_square_grid(1.0, n);  // placeholder; solver sizes off the basis
  p.basis = std::make_shared<IdentityBasis>(n);
  return p;
}

double nrm2(std::span<const cplx> v) {
  double s = 0.0;
  for (const cplx& c : v) s += std::norm(c);
  return std::sqrt(s);
}

// --------------------------------------------------------------------------
// 1. adjoint identity, 100 random trials per operator kind

double adjoint_gap(const LinearOp& op, std::uint64_t seed) {
  CounterRng rng{seed};
  std::vector<double> x(op.input_size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = rng.normal(i);
  std::vector<cplx> y(op.output_size());
  for (std::size_t i = 0; i < y.size(); ++i)
    y[i] = {rng.normal(x.size() + 2 * i), rng.normal(x.size() + 2 * i + 1)};
  std::vector<cplx> lx(op.output_size()), lhy(op.input_size());
  op.apply(x, lx);
  op.adjoint(y, lhy);
  cplx fwd = 0.0, bwd = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) fwd += lx[i] * std::conj(y[i]);
  for (std::size_t j = 0; j < x.size(); ++j) bwd += x[j] * std::conj(lhy[j]);
  return std::abs(fwd - bwd) / (nrm2(lx) * nrm2(y));
}

bool c01(std::string& d) {
  const SceneGeometry geom{525e-9, 6.0, 5e-6};
  const WallScattering wall{1.0, 1.0 / 6.0};
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    CounterRng rng{derive_seed(101, trial)};
    auto dim = [&](std::uint64_t c) {
      return static_cast<std::size_t>(4 + rng.uniform(c) * 29.0);
    };
    const Grid2D obj = make_grid(-2, 2, dim(0), -2, 2, dim(1));
    const SourceMode mode = trial % 2 ? SourceMode::reflective : SourceMode::opaque;

    const Grid2D wg = make_grid(-2, 2, dim(2), -2, 2, dim(3));
    const IntensityOperator iop(obj, mode, 6.0, geom, wg);
    worst = std::max(worst, adjoint_gap(iop, derive_seed(201, trial)));

    const Vec2 r{4.0 * rng.uniform(4) - 2.0, 4.0 * rng.uniform(5) - 2.0};
    const Grid2D rho = make_grid(-15e-6, 15e-6, dim(6), -15e-6, 15e-6, dim(7));
    const CoherenceOperator cop(obj, mode, 6.0, geom, &wall, r, rho, 1.5e-6);
    worst = std::max(worst, adjoint_gap(cop, derive_seed(301, trial)));
  }
  d = "max gap " + sci(worst) + " (tol 1e-10, 100 trials/kind, grids <= 32x32)";
  return worst < 1e-10;
}

// --------------------------------------------------------------------------
// 2. forward pipeline vs operator prediction on the default scene

bool c02(std::string& d) {
  const ScenarioConfig cfg;  // default scene
  const BuiltScene s = build_scene(cfg);
  const auto& og = s.source.profile.grid;
  const auto& t = s.source.profile.values;
  double worst = 0.0;

  const IntensityImage pipe = scattered_intensity(s.source, s.geom, s.intensity_grid);
  const IntensityOperator iop(og, s.source.mode, cfg.object.extension_extent, s.geom,
                              s.intensity_grid);
  const auto ipred = iop.predict(t, 0.0);
  double scale = 0.0;
  for (double v : pipe.values) scale = std::max(scale, std::abs(v));
  for (std::size_t i = 0; i < ipred.size(); ++i) {
    worst = std::max(worst, std::abs(ipred[i].real() - pipe.values[i]) / scale);
    worst = std::max(worst, std::abs(ipred[i].imag()) / scale);
  }

  // brute-force propagation is slow, so a spread 3x3 subset of the 7x7 r-grid
  // stands in for all samples; every unmasked entry of each sample is checked
  std::size_t checked = 0;
  for (std::size_t iy : {0, 3, 6})
    for (std::size_t ix : {0, 3, 6}) {
      const Vec2 r = s.r_positions[iy * 7 + ix];
      CoherenceSample cs =
          propagate_coherence(s.source, s.geom, r, s.rho_grid, s.exclusion_radius);
      scatter_coherence(cs, s.wall);
      const CoherenceOperator cop(og, s.source.mode, cfg.object.extension_extent,
                                  s.geom, &s.wall, r, s.rho_grid, s.exclusion_radius);
      const auto cpred = cop.predict_full(t);
      double cs_scale = 0.0;
      for (std::size_t q = 0; q < cs.values.size(); ++q)
        if (cs.mask[q]) cs_scale = std::max(cs_scale, std::abs(cs.values[q]));
      for (std::size_t q = 0; q < cs.values.size(); ++q)
        if (cs.mask[q])
          worst = std::max(worst, std::abs(cpred[q] - cs.values[q]) / cs_scale);
      ++checked;
    }
  d = "max |pipeline-operator| " + sci(worst) +
      " of sample scale (tol 1e-9, intensity + " + std::to_string(checked) +
      " coherence samples)";
  return worst < 1e-9;
}

// --------------------------------------------------------------------------
// 3. Appendix-A gradients vs central finite differences

bool c03(std::string& d) {
  ScenarioConfig cfg;
  cfg.scene = {525e-9, 6.0, 5e-6};
  cfg.object.grid = {12, 12, -2, 2, -2, 2};
  cfg.object.star_outer = 1.4;
  cfg.intensity.grid = {10, 10, -2, 2, -2, 2};
  cfg.intensity.noise_sigma = 0.1;
  cfg.coherence.rho_grid = {9, 9, -15e-6, 15e-6, -15e-6, 15e-6};
  cfg.coherence.exclusion_radius = 2e-6;
  cfg.coherence.r_grid = {2, 2, -1, 1, -1, 1};
  cfg.coherence.noise_sigma = 1e-3;
  const BuiltScene s = build_scene(cfg);
  const auto data = simulate_measurements(s, cfg, 7, 1);
  const FusionProblem p = assemble_problem(cfg, s, data, 1);

  const std::size_t n = p.basis->size();
  const auto x = random_vec(n, 31);
  const auto z = random_vec(n, 32);
  const auto u = random_vec(n, 33);
  const double alpha = 100.3, beta = 1.0, mu = 0.37;

  const auto lag = [&](std::span<const double> xx, double aa) {
    double l = objective(p, 0.0, xx, aa, beta);
    for (std::size_t i = 0; i < n; ++i) {
      const double v = xx[i] - z[i];
      l += u[i] * v + 0.5 * mu * v * v;
    }
    return l;
  };

  const auto g = gradient_x(p, x, alpha, beta, z, u, mu);
  CounterRng pick{55};
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    const std::size_t j = static_cast<std::size_t>(pick.uniform(t) * n);
    const double h = 1e-6 * std::max(1.0, std::abs(x[j]));
    auto xp = x, xm = x;
    xp[j] += h;
    xm[j] -= h;
    const double fd = (lag(xp, alpha) - lag(xm, alpha)) / (2.0 * h);
    worst = std::max(worst,
                     std::abs(g[j] - fd) / std::max({std::abs(g[j]), std::abs(fd), 1e-8}));
  }
  const double ga = gradient_alpha(p, x, alpha, beta);
  const double h = 1e-6;
  const double fda = (lag(x, alpha + h) - lag(x, alpha - h)) / (2.0 * h);
  worst = std::max(worst, std::abs(ga - fda) / std::max({std::abs(ga), std::abs(fda), 1e-8}));
  d = "max rel error " + sci(worst) + " (tol 1e-5, 20 coords + alpha, 12x12 fused)";
  return worst < 1e-5;
}

// --------------------------------------------------------------------------
// 4. solver vs analytic LASSO and Eigen normal equations

bool c04(std::string& d) {
  // shrinkage fixed point: min |x|_1 + ||x-y||^2 has x* = shrink(y, 1/2)
  FusionProblem lasso = identity_problem(2);
  auto id = std::make_shared<DenseOp>(2, 2);
  id->a[0] = 1.0;
  id->a[3] = 1.0;
  lasso.terms.push_back({id, {cplx(1.0), cplx(0.1)}, 1.0, {}, 0.0, false});
  SolverConfig sc;
  sc.lambda_s = 1.0;
  sc.mu = 1.0;
  sc.max_outer = 400;
  sc.max_inner = 100;
  sc.estimate_ambient = false;
  const auto res = solve(lasso, sc);
  const double linf =
      std::max(std::abs(res.profile[0] - 0.5), std::abs(res.profile[1] - 0.0));

  // lambda_s = 0: fused dense instances against H x = rhs solved by Eigen
  double worst_rel = 0.0;
  for (std::uint64_t seed : {3ULL, 4ULL}) {
    const std::size_t n = 6;
    FusionProblem p = identity_problem(n);
    auto op1 = random_op(n, n, seed * 10 + 1, 2.0);
    auto op2 = random_op(n, 8, seed * 10 + 3, 1.0);
    const std::vector<double> w2{1, 1, 0, 1, 0, 1, 1, 1};
    p.terms.push_back({op1, random_cvec(n, seed * 10 + 2), 1.0, {}, 0.0, false});
    p.terms.push_back({op2, random_cvec(8, seed * 10 + 4), 0.6, w2, 0.0, false});

    SolverConfig sc0;
    sc0.lambda_s = 0.0;
    sc0.mu = 1.0;
    sc0.max_outer = 500;
    sc0.max_inner = 200;
    sc0.estimate_ambient = false;
    const auto r0 = solve(p, sc0);

    Eigen::MatrixXcd a1(n, n), a2(8, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) a1(i, j) = op1->a[i * n + j];
    for (std::size_t i = 0; i < 8; ++i)
      for (std::size_t j = 0; j < n; ++j) a2(i, j) = op2->a[i * n + j];
    Eigen::VectorXcd y1(n), y2(8);
    for (std::size_t i = 0; i < n; ++i) y1(i) = p.terms[0].data[i];
    for (std::size_t i = 0; i < 8; ++i) y2(i) = p.terms[1].data[i];
    Eigen::MatrixXd wm = Eigen::MatrixXd::Zero(8, 8);
    for (std::size_t i = 0; i < 8; ++i) wm(i, i) = w2[i];
    const Eigen::MatrixXd h = (a1.adjoint() * a1).real() * 1.0 +
                              (a2.adjoint() * wm * a2).real() * 0.6;
    const Eigen::VectorXd rhs =
        (a1.adjoint() * y1).real() * 1.0 + (a2.adjoint() * wm * y2).real() * 0.6;
    const Eigen::VectorXd want = h.ldlt().solve(rhs);
    double err = 0.0, ref = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      err += (r0.profile[i] - want(i)) * (r0.profile[i] - want(i));
      ref += want(i) * want(i);
    }
    worst_rel = std::max(worst_rel, std::sqrt(err / ref));
  }
  d = "lasso Linf " + sci(linf) + " (tol 1e-3); normal-eq rel " + sci(worst_rel) +
      " (tol 1e-4)";
  return linf < 1e-3 && worst_rel < 1e-4;
}

// --------------------------------------------------------------------------
// 5. noiseless coherence-only reconstruction of the star

ScenarioConfig c05_scene() {
  ScenarioConfig cfg;
  cfg.scene = {525e-9, 6.0, 5e-6};
  cfg.object.grid = {64, 64, -2, 2, -2, 2};
  cfg.intensity.enabled = false;
  cfg.coherence.rho_grid = {25, 25, -15e-6, 15e-6, -15e-6, 15e-6};
  cfg.coherence.exclusion_radius = 1e-6;
  // sample spacing 0.3 m ~ 3 sigma_B = 3 d/(lc k): the B windows tile the star support
  cfg.coherence.r_grid = {7, 7, -0.9, 0.9, -0.9, 0.9};
  cfg.solver.lambda_s = 0.0;
  cfg.solver.estimate_ambient = false;
  return cfg;
}

bool c05(std::string& d) {
  const ScenarioConfig cfg = c05_scene();
  const BuiltScene s = build_scene(cfg);
  const auto data = simulate_measurements(s, cfg, 21, 1);
  const FusionProblem p = assemble_problem(cfg, s, data, 1);
  const auto res = solve(p, cfg.solver.solver(0, 1));
  const double m = mse(res.profile, data.truth.values);
  d = "raw MSE " + sci(m) + " (tol 0.05, 64x64 star, 7x7 samples, lambda_s=0)";
  return m < 0.05;
}

// --------------------------------------------------------------------------
// 6. Table 1/2 trends: argmin lambda_s non-decreasing in noise; top row flat

bool sweep_trend(const ScenarioConfig& cfg, const std::string& stem, std::string& d) {
  const fs::path cfgp = write_config(stem, cfg);
  const fs::path run = g_tmp / (stem + "_run");
  if (cmd_sweep(cfgp, run, 2026, 1) != 0) {
    d = stem + ": cmd_sweep failed";
    return false;
  }
  const std::size_t nl = cfg.sweep.lambda_s.size(), nn = cfg.sweep.noise.size();
  const auto mean = read_matrix_csv(run / kSweepDir / "sweep_mean.csv", nn, nl);
  std::string cells;
  std::size_t prev = 0;
  bool monotone = true;
  for (std::size_t ni = 0; ni < nn; ++ni) {
    std::size_t best = 0;
    for (std::size_t li = 1; li < nl; ++li)
      if (mean[li * nn + ni] < mean[best * nn + ni]) best = li;
    if (best < prev) monotone = false;
    prev = best;
    cells += (ni ? "," : "") + std::to_string(best);
  }
  double lo = mean[(nl - 1) * nn], hi = lo;
  for (std::size_t ni = 1; ni < nn; ++ni) {
    lo = std::min(lo, mean[(nl - 1) * nn + ni]);
    hi = std::max(hi, mean[(nl - 1) * nn + ni]);
  }
  const double spread = hi / lo - 1.0;
  d += stem + ": argmin rows [" + cells + "] spread " + sci(spread) + "; ";
  return monotone && spread < 0.15;
}

bool c06(std::string& d) {
  ScenarioConfig base;
  base.scene = {525e-9, 6.0, 5e-6};
  base.object.grid = {48, 48, -2, 2, -2, 2};
  base.solver.max_outer = 200;
  base.solver.max_inner = 60;
  base.sweep.trials = 3;
  base.sweep.lambda_s = {0, 0.0005, 0.005, 0.05, 0.5};

  ScenarioConfig coh = base;  // coherence-only, sigma_C columns
  coh.intensity.enabled = false;
  coh.coherence.rho_grid = {25, 25, -15e-6, 15e-6, -15e-6, 15e-6};
  coh.coherence.exclusion_radius = 1e-6;
  coh.coherence.r_grid = {7, 7, -0.9, 0.9, -0.9, 0.9};
  coh.solver.estimate_ambient = false;
  coh.sweep.vary = "coherence";
  coh.sweep.noise = {0, 0.01, 0.05, 0.1};

  ScenarioConfig inten = base;  // intensity-only, sigma_I columns
  inten.coherence.enabled = false;
  inten.intensity.grid = {48, 48, -2, 2, -2, 2};
  inten.sweep.vary = "intensity";
  inten.sweep.noise = {0, 0.1, 0.5, 1.0};
  // heavier ladder and faster dual dynamics: the intensity term sums ~2300 O(1)
  // samples, so the lambda-dominated regime needs mu large enough to reach it
  inten.sweep.lambda_s = {0, 0.5, 5, 50};
  inten.solver.mu = 0.5;
  inten.solver.max_outer = 600;

  const bool ok1 = sweep_trend(coh, "table1", d);
  const bool ok2 = sweep_trend(inten, "table2", d);
  d += "(argmin non-decreasing, top-row spread < 15%, 3 trials)";
  return ok1 && ok2;
}

// --------------------------------------------------------------------------
// 7. wall scattering low-passes the reconstruction

double lowpass_highband(double width_x, double width_y) {
  ScenarioConfig cfg;
  cfg.scene = {525e-9, 6.0, 5e-6};
  cfg.object.grid = {48, 48, -2, 2, -2, 2};
  cfg.wall.attenuation_width_x = width_x;
  cfg.wall.attenuation_width_y = width_y;
  cfg.intensity.enabled = false;
  cfg.coherence.rho_grid = {25, 25, -15e-6, 15e-6, -15e-6, 15e-6};
  cfg.coherence.exclusion_radius = 1e-6;
  cfg.coherence.r_grid = {5, 5, -2, 2, -2, 2};
  cfg.solver.lambda_s = 0.0;
  cfg.solver.estimate_ambient = false;
  cfg.solver.max_outer = 200;
  const BuiltScene s = build_scene(cfg);
  const auto data = simulate_measurements(s, cfg, 31, 1);
  const FusionProblem p = assemble_problem(cfg, s, data, 1);
  const auto res = solve(p, cfg.solver.solver(0, 1));
  return highband_energy_fraction(res.state.x, 48, 48);
}

bool c07(std::string& d) {
  const double strong = lowpass_highband(0.25e-6, 1.5e-6);
  const double weak = lowpass_highband(3e-6, 18e-6);
  d = "high-band fraction strong " + sci(strong) + " < weak " + sci(weak) +
      " (strict, widths (0.25,1.5) vs (3,18) um)";
  return strong < weak;
}

// --------------------------------------------------------------------------
// 8. ambient coefficient recovery from noiseless intensity

bool c08(std::string& d) {
  ScenarioConfig cfg;
  cfg.scene = {525e-9, 6.0, 5e-6};
  cfg.object.grid = {32, 32, -2, 2, -2, 2};
  cfg.intensity.grid = {32, 32, -2, 2, -2, 2};
  cfg.coherence.enabled = false;
  cfg.solver.lambda_s = 0.0;
  const BuiltScene s = build_scene(cfg);
  const auto data = simulate_measurements(s, cfg, 17, 1);
  const FusionProblem p = assemble_problem(cfg, s, data, 1);
  const auto res = solve(p, cfg.solver.solver(0, 1));
  d = "alpha " + sci(res.state.alpha) + " (want [95,105], true 100)";
  return res.state.alpha >= 95.0 && res.state.alpha <= 105.0;
}

// --------------------------------------------------------------------------
// 9. Eq-15 weighting: exclusions follow coherence coverage and do not hurt

ScenarioConfig c09_scene() {
  ScenarioConfig cfg;
  cfg.scene = {525e-9, 6.0, 1e-5};
  cfg.object.grid = {32, 32, -2, 2, -2, 2};
  cfg.intensity.grid = {24, 24, -2, 2, -2, 2};
  cfg.intensity.noise_sigma = 0.25;
  cfg.coherence.rho_grid = {25, 25, -15e-6, 15e-6, -15e-6, 15e-6};
  cfg.coherence.exclusion_radius = 1e-6;
  cfg.coherence.r_grid = {3, 2, -1, 1, 0.5, 1.5};  // top half of the wall
  cfg.coherence.noise_sigma = 1e-4;
  cfg.weighting.kappa = 0.25;
  cfg.weighting.target = "intensity";
  cfg.solver.lambda_s = 5e-4;
  cfg.solver.max_outer = 300;
  return cfg;
}

bool c09(std::string& d) {
  const ScenarioConfig base = c09_scene();
  ScenarioConfig wcfg = base;
  wcfg.weighting.enabled = true;
  const BuiltScene s = build_scene(base);

  const auto data0 = simulate_measurements(s, base, 900, 1);
  const FusionProblem pw = assemble_problem(wcfg, s, data0, 1);
  const auto& w = pw.terms[0].sample_weights;
  std::size_t top = 0, top_excl = 0, bot = 0, bot_excl = 0;
  const Grid2D wg = s.intensity_grid;
  for (std::size_t iy = 0; iy < wg.y.count; ++iy)
    for (std::size_t ix = 0; ix < wg.x.count; ++ix) {
      const bool covered = wg.y.coord(iy) > 0.0;
      const bool excluded = w[wg.index(ix, iy)] == 0.0;
      (covered ? top : bot) += 1;
      if (excluded) (covered ? top_excl : bot_excl) += 1;
    }
  const double ftop = double(top_excl) / top, fbot = double(bot_excl) / bot;

  double sum_on = 0.0, sum_off = 0.0;
  for (std::uint64_t seed : {41ULL, 42ULL, 43ULL}) {
    const auto data = simulate_measurements(s, base, seed, 1);
    const auto r_off = solve(assemble_problem(base, s, data, 1), base.solver.solver(0, 1));
    const auto r_on = solve(assemble_problem(wcfg, s, data, 1), wcfg.solver.solver(0, 1));
    sum_off += mse(r_off.profile, data.truth.values);
    sum_on += mse(r_on.profile, data.truth.values);
  }
  d = "excluded covered " + sci(ftop) + " > uncovered " + sci(fbot) + "; MSE weighted " +
      sci(sum_on / 3.0) + " <= plain " + sci(sum_off / 3.0) + " (3 seeds)";
  return ftop > fbot && sum_on <= sum_off;
}

// --------------------------------------------------------------------------
// 10. null-space octave structure of the sparse-domain maps

bool c10(std::string& d) {
  ScenarioConfig cfg;
  cfg.scene = {525e-9, 6.0, 1.25e-6};  // blur d/(lc k) ~ 3 px: intensity is low-pass
  cfg.object.grid = {32, 32, -2, 2, -2, 2};
  // wall grid strictly inside the object so the blur kernel is never edge-truncated
  cfg.intensity.grid = {32, 32, -0.5, 0.5, -0.5, 0.5};
  cfg.coherence.rho_grid = {25, 25, -15e-6, 15e-6, -15e-6, 15e-6};
  cfg.coherence.exclusion_radius = 1e-6;
  cfg.coherence.r_grid = {3, 3, -0.5, 0.5, -0.5, 0.5};
  const BuiltScene s = build_scene(cfg);
  const auto& og = s.source.profile.grid;
  const auto basis = make_basis("dct", og);

  const IntensityOperator iop(og, s.source.mode, cfg.object.extension_extent, s.geom,
                              s.intensity_grid);
  const auto mi = null_map_basis(iop, *basis, 1);
  std::vector<double> mc;
  for (const Vec2& r : s.r_positions) {
    const CoherenceOperator cop(og, s.source.mode, cfg.object.extension_extent, s.geom,
                                &s.wall, r, s.rho_grid, s.exclusion_radius);
    const auto m = null_map_basis(cop, *basis, 1);
    mc = mc.empty() ? m : combine_maps(mc, m);
  }

  int lowest = 0;
  while ((32 >> (lowest + 1)) >= 1) ++lowest;
  const double ilow = octave_mean(mi, 32, 32, lowest);
  const double ihigh = octave_mean(mi, 32, 32, 0);
  const double chigh = octave_mean(mc, 32, 32, 0);
  d = "intensity low/high " + sci(ilow / ihigh) + " (want >= 10); coherence high " +
      sci(chigh) + " > intensity high " + sci(ihigh);
  return ilow >= 10.0 * ihigh && chigh > ihigh;
}

// --------------------------------------------------------------------------
// 11. converged runs end under the phase-2 thresholds, per diagnostics CSV

bool c11(std::string& d) {
  int converged = 0, runs = 0;
  bool ok = true;
  double last_primal = 0.0, last_dual = 0.0;
  for (double lambda_s : {1e-3, 5e-3}) {
    ScenarioConfig cfg;
    cfg.scene = {525e-9, 6.0, 5e-6};
    cfg.object.grid = {24, 24, -2, 2, -2, 2};
    cfg.intensity.grid = {24, 24, -2, 2, -2, 2};
    cfg.coherence.rho_grid = {15, 15, -15e-6, 15e-6, -15e-6, 15e-6};
    cfg.coherence.exclusion_radius = 2e-6;
    cfg.coherence.r_grid = {3, 3, -2, 2, -2, 2};
    cfg.solver.lambda_s = lambda_s;
    cfg.solver.max_outer = 1000;
    const std::string stem = "c11_" + std::to_string(runs);
    const fs::path cfgp = write_config(stem, cfg);
    const fs::path run = g_tmp / (stem + "_run");
    if (cmd_simulate(cfgp, run, 3, 1) != 0 || cmd_reconstruct(cfgp, run, 0, 1) != 0) {
      d = "harness command failed";
      return false;
    }
    ++runs;
    if (slurp(run / kReconstructionDir / "solve_summary.txt").find("converged = true") ==
        std::string::npos)
      continue;
    ++converged;
    std::ifstream log(run / kReconstructionDir / "solve_log.csv");
    std::string line, last;
    std::getline(log, line);  // header
    while (std::getline(log, line))
      if (!line.empty()) last = line;
    std::vector<std::string> cols;
    std::stringstream ss(last);
    for (std::string c; std::getline(ss, c, ',');) cols.push_back(c);
    last_primal = std::stod(cols.at(3));
    last_dual = std::stod(cols.at(4));
    ok = ok && last_primal < 0.5 && last_dual < 1e-6;
  }
  d = std::to_string(converged) + "/" + std::to_string(runs) +
      " runs converged; final primal " + sci(last_primal) + " < 0.5, dual " +
      sci(last_dual) + " < 1e-6";
  return ok && converged > 0;
}

// --------------------------------------------------------------------------
// 12. cmd_sweep determinism: same config+seed => byte-identical CSVs

bool c12(std::string& d) {
  ScenarioConfig cfg;
  cfg.scene = {525e-9, 6.0, 5e-6};
  cfg.object.grid = {16, 16, -2, 2, -2, 2};
  cfg.intensity.grid = {12, 12, -2, 2, -2, 2};
  cfg.intensity.noise_sigma = 0.1;
  cfg.coherence.rho_grid = {9, 9, -15e-6, 15e-6, -15e-6, 15e-6};
  cfg.coherence.exclusion_radius = 2e-6;
  cfg.coherence.r_grid = {2, 2, -1, 1, -1, 1};
  cfg.solver.max_outer = 40;
  cfg.solver.max_inner = 30;
  cfg.sweep.lambda_s = {0, 5e-3};
  cfg.sweep.noise = {0, 0.05};
  cfg.sweep.trials = 2;
  const fs::path cfgp = write_config("c12", cfg);
  const fs::path run1 = g_tmp / "c12_a", run2 = g_tmp / "c12_b";
  if (cmd_sweep(cfgp, run1, 77, 1) != 0 || cmd_sweep(cfgp, run2, 77, 1) != 0) {
    d = "cmd_sweep failed";
    return false;
  }
  bool same = true;
  for (const char* f :
       {"sweep_mean.csv", "sweep_sd.csv", "sweep_cells.csv", "manifest.json"})
    same = same && slurp(run1 / kSweepDir / f) == slurp(run2 / kSweepDir / f);
  d = same ? "sweep_mean/sd/cells.csv and manifest byte-identical across reruns"
           : "byte mismatch between identical sweep runs";
  return same;
}

struct Criterion {
  int id;
  const char* label;
  double budget_s;  // wall-clock bound stated in the criterion (0 = none)
  bool (*fn)(std::string&);
};

const Criterion kCriteria[] = {
    {1, "operator adjoint identity", 10, c01},
    {2, "forward/operator agreement", 60, c02},
    {3, "gradient fidelity", 30, c03},
    {4, "solver-oracle equivalence", 10, c04},
    {5, "noiseless coherence MSE", 600, c05},
    {6, "noise/lambda sweep trends", 3600, c06},
    {7, "wall low-pass effect", 1200, c07},
    {8, "ambient recovery", 300, c08},
    {9, "sample weighting", 1800, c09},
    {10, "null-space octave structure", 300, c10},
    {11, "convergence contract", 0, c11},
    {12, "sweep determinism", 0, c12},
};

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  g_tmp = fs::temp_directory_path() /
          ("nlos_acceptance_" + std::to_string(counter_prf(3, ::getpid())));
  fs::create_directories(g_tmp);

  int failures = 0;
  for (const Criterion& c : kCriteria) {
    if (!only.empty() && !only.count(c.id)) continue;
    std::string detail;
    bool ok = false;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      ok = c.fn(detail);
    } catch (const std::exception& e) {
      ok = false;
      detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.budget_s > 0 && secs >= c.budget_s) {
      ok = false;
      detail += " [over budget " + sci(c.budget_s) + " s]";
    }
    std::printf("%s  criterion %2d  %-28s  %s  [%.1f s]\n", ok ? "PASS" : "FAIL", c.id,
                c.label, detail.c_str(), secs);
    std::fflush(stdout);
    failures += ok ? 0 : 1;
  }
  fs::remove_all(g_tmp);
  std::printf("%d criteria failed\n", failures);
  return failures;
}
