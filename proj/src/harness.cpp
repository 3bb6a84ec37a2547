#include "nlos/harness.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>

#include "nlos/analysis.hpp"
#include "nlos/errors.hpp"
#include "nlos/io_csv.hpp"
#include "nlos/manifest.hpp"
#include "nlos/noise.hpp"
#include "nlos/parallel.hpp"
#include "nlos/simd/kernels.hpp"

namespace nlos {

namespace {

namespace fs = std::filesystem;

std::string index_name(const std::string& prefix, std::size_t i,
                       const std::string& suffix) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%03zu", i);
  return prefix + buf + suffix;
}

int run_guarded(const char* what, const std::function<void()>& fn) {
  try {
    fn();
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << what << ": " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << what << ": " << e.what() << "\n";
    return 4;
  } catch (const std::invalid_argument& e) {
    std::cerr << what << ": " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << what << ": " << e.what() << "\n";
    return 3;
  }
}

Manifest base_manifest(const std::string& command, const ScenarioConfig& cfg,
                       std::uint64_t seed, int threads) {
  Manifest m;
  m.command = command;
  m.config_hash = config_hash(cfg);
  m.seed = seed;
  m.threads = threads;
  m.kernels = simd::active_kernels().name;
  return m;
}

std::vector<double> abs_values(const std::vector<cplx>& v) {
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::abs(v[i]);
  return out;
}

// |Γ| tiles laid out row-major on a near-square canvas.
void write_coherence_mosaic(const fs::path& path,
                            const std::vector<CoherenceSample>& samples) {
  if (samples.empty()) return;
  const std::size_t rnx = samples[0].rho_grid.x.count;
  const std::size_t rny = samples[0].rho_grid.y.count;
  const std::size_t cols =
      static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(samples.size()))));
  const std::size_t rows = (samples.size() + cols - 1) / cols;
  std::vector<double> canvas(cols * rnx * rows * rny, 0.0);
  for (std::size_t t = 0; t < samples.size(); ++t) {
    const std::size_t tr = t / cols, tc = t % cols;
    for (std::size_t iy = 0; iy < rny; ++iy)
      for (std::size_t ix = 0; ix < rnx; ++ix)
        canvas[(tr * rny + iy) * cols * rnx + tc * rnx + ix] =
            std::abs(samples[t].values[samples[t].rho_grid.index(ix, iy)]);
  }
  write_pgm(path, canvas, cols * rnx, rows * rny, "tiles=" + std::to_string(samples.size()));
}

std::shared_ptr<IntensityOperator> make_intensity_op(const ScenarioConfig& cfg,
                                                     const BuiltScene& scene) {
  return std::make_shared<IntensityOperator>(scene.source.profile.grid,
                                             scene.source.mode,
                                             scene.source.extension_extent, scene.geom,
                                             scene.intensity_grid);
}

std::shared_ptr<CoherenceOperator> make_coherence_op(const ScenarioConfig& cfg,
                                                     const BuiltScene& scene,
                                                     std::size_t i) {
  return std::make_shared<CoherenceOperator>(
      scene.source.profile.grid, scene.source.mode, scene.source.extension_extent,
      scene.geom, &scene.wall, scene.r_positions[i], scene.rho_grid,
      scene.exclusion_radius);
}

void write_solve_log(const fs::path& path, const SolveResult& res) {
  std::string out = "iter,phase,objective,primal,dual,alpha,beta,inner,wall_ms\n";
  for (const IterationStats& s : res.history) {
    out += std::to_string(s.iter) + "," + std::to_string(s.phase) + "," +
           format_double(s.objective) + "," + format_double(s.primal) + "," +
           format_double(s.dual) + "," + format_double(s.alpha) + "," +
           format_double(s.beta) + "," + std::to_string(s.inner) + "," +
           format_double(s.wall_ms) + "\n";
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path.string());
  f << out;
}

}  // namespace

BuiltScene build_scene(const ScenarioConfig& cfg, const fs::path& base_dir) {
  BuiltScene s;
  s.geom = cfg.scene.geometry();
  s.wall = cfg.wall.scattering();
  const Grid2D obj = cfg.object.grid.grid();
  OpacityProfile truth;
  if (cfg.object.source == "star") {
    truth = make_star_profile(obj, {cfg.object.star_center_x, cfg.object.star_center_y},
                              cfg.object.star_points, cfg.object.star_outer,
                              cfg.object.star_inner);
  } else {
    fs::path p = cfg.object.csv_path;
    if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
    truth = OpacityProfile{obj, read_matrix_csv(p, obj.x.count, obj.y.count)};
  }
  s.source = SourceField{std::move(truth), cfg.object.extension_extent,
                         cfg.object.source_mode()};
  s.intensity_grid = cfg.intensity.grid.grid();
  s.rho_grid = cfg.coherence.rho_grid.grid();
  s.exclusion_radius = cfg.coherence.exclusion_radius;
  s.r_positions = cfg.coherence.sample_positions();
  return s;
}

SimulatedData simulate_measurements(const BuiltScene& scene, const ScenarioConfig& cfg,
                                    std::uint64_t seed, int threads) {
  SimulatedData d;
  d.truth = scene.source.profile;
  if (cfg.intensity.enabled) {
    const auto op = make_intensity_op(cfg, scene);
    std::vector<double> clean =
        intensity_apply(*op, d.truth.values, cfg.intensity.ambient);
    d.intensity_noiseless = IntensityImage{scene.intensity_grid, clean};
    add_noise(clean, cfg.intensity.noise_sigma, CounterRng{derive_seed(seed, 1)});
    d.intensity = IntensityImage{scene.intensity_grid, std::move(clean)};
  }
  if (cfg.coherence.enabled) {
    const std::size_t ns = scene.r_positions.size();
    d.coherence_noiseless.resize(ns);
    d.coherence.resize(ns);
    parallel_for(ns, threads, [&](std::size_t i) {
      const auto op = make_coherence_op(cfg, scene, i);
      CoherenceSample s;
      s.r = scene.r_positions[i];
      s.rho_grid = scene.rho_grid;
      s.exclusion_radius = scene.exclusion_radius;
      s.values = op->predict_full(d.truth.values);
      s.mask = exclusion_mask(scene.rho_grid, scene.exclusion_radius);
      d.coherence_noiseless[i] = s;
      add_noise(s.values, cfg.coherence.noise_sigma,
                CounterRng{derive_seed(seed, 100 + i)});
      d.coherence[i] = std::move(s);
    });
  }
  return d;
}

FusionProblem assemble_problem(const ScenarioConfig& cfg, const BuiltScene& scene,
                               const SimulatedData& data, int threads) {
  FusionProblem p;
  p.obj = scene.source.profile.grid;
  p.basis = make_basis(cfg.solver.basis, p.obj);
  if (cfg.intensity.enabled) {
    MeasurementTerm t;
    t.op = make_intensity_op(cfg, scene);
    t.data.reserve(data.intensity.values.size());
    for (double v : data.intensity.values) t.data.push_back(v);
    t.weight = cfg.intensity.weight;
    t.noise_sigma = cfg.intensity.noise_sigma;
    p.terms.push_back(std::move(t));
  }
  if (cfg.coherence.enabled) {
    for (std::size_t i = 0; i < data.coherence.size(); ++i) {
      MeasurementTerm t;
      const auto op = make_coherence_op(cfg, scene, i);
      const auto mask = op->mask();
      for (std::size_t j = 0; j < mask.size(); ++j)
        if (mask[j]) t.data.push_back(data.coherence[i].values[j]);
      t.op = op;
      t.weight = cfg.coherence.weight;
      t.noise_sigma = cfg.coherence.noise_sigma;
      t.auto_scale = cfg.coherence.auto_scale;
      p.terms.push_back(std::move(t));
    }
  }
  if (cfg.solver.lambda_mode == "inv_norm2") {
    const auto& k = simd::active_kernels();
    for (MeasurementTerm& t : p.terms) {
      const double n2 = k.wnrm2sq(t.data.size(), nullptr, t.data.data());
      t.weight = n2 > 0.0 ? 1.0 / n2 : 1.0;
    }
  }
  if (cfg.weighting.enabled) {
    for (std::size_t i = 0; i < p.terms.size(); ++i) {
      const bool is_intensity = p.terms[i].op->has_ambient();
      const std::string& tgt = cfg.weighting.target;
      if (tgt == "intensity" && !is_intensity) continue;
      if (tgt == "coherence" && is_intensity) continue;
      bool trivial = false;
      p.terms[i].sample_weights =
          sample_weights(p.terms, i, cfg.weighting.kappa, threads, &trivial);
      if (trivial)
        std::cerr << "weighting: fewer than two terms, keeping all samples\n";
    }
  }
  return p;
}

int cmd_simulate(const fs::path& config_path, const fs::path& run_dir,
                 std::uint64_t seed, int threads) {
  return run_guarded("simulate", [&] {
    const ScenarioConfig cfg = load_config(config_path);
    const BuiltScene scene = build_scene(cfg, config_path.parent_path());
    const SimulatedData data = simulate_measurements(scene, cfg, seed, threads);
    const fs::path dir = run_dir / kMeasurementsDir;
    fs::create_directories(dir);
    std::vector<std::string> names;

    const Grid2D& og = scene.source.profile.grid;
    write_matrix_csv(dir / "truth.csv", data.truth.values, og.x.count, og.y.count);
    names.push_back("truth.csv");
    write_pgm(dir / "truth.pgm", data.truth.values, og.x.count, og.y.count);
    names.push_back("truth.pgm");

    if (cfg.intensity.enabled) {
      const Grid2D& wg = scene.intensity_grid;
      write_matrix_csv(dir / "intensity.csv", data.intensity.values, wg.x.count,
                       wg.y.count);
      names.push_back("intensity.csv");
      write_matrix_csv(dir / "intensity_noiseless.csv", data.intensity_noiseless.values,
                       wg.x.count, wg.y.count);
      names.push_back("intensity_noiseless.csv");
      write_pgm(dir / "intensity.pgm", data.intensity.values, wg.x.count, wg.y.count);
      names.push_back("intensity.pgm");
    }
    for (std::size_t i = 0; i < data.coherence.size(); ++i) {
      const std::string noisy = index_name("coherence_", i, ".csv");
      const std::string clean = index_name("coherence_noiseless_", i, ".csv");
      write_coherence_csv(dir / noisy, data.coherence[i]);
      write_coherence_csv(dir / clean, data.coherence_noiseless[i]);
      names.push_back(noisy);
      names.push_back(clean);
    }
    if (!data.coherence.empty()) {
      write_coherence_mosaic(dir / "coherence_mosaic.pgm", data.coherence);
      names.push_back("coherence_mosaic.pgm");
    }
    finalize_manifest(dir, base_manifest("simulate", cfg, seed, threads), names);
  });
}

int cmd_reconstruct(const fs::path& config_path, const fs::path& run_dir, int phase,
                    int threads) {
  return run_guarded("reconstruct", [&] {
    const ScenarioConfig cfg = load_config(config_path);
    const BuiltScene scene = build_scene(cfg, config_path.parent_path());
    const fs::path mdir = run_dir / kMeasurementsDir;

    SimulatedData data;
    if (cfg.intensity.enabled) {
      const Grid2D& wg = scene.intensity_grid;
      data.intensity = IntensityImage{
          wg, read_matrix_csv(mdir / "intensity.csv", wg.x.count, wg.y.count)};
    }
    data.coherence.resize(scene.r_positions.size());
    if (cfg.coherence.enabled) {
      for (std::size_t i = 0; i < scene.r_positions.size(); ++i)
        data.coherence[i] =
            read_coherence_csv(mdir / index_name("coherence_", i, ".csv"), scene.rho_grid);
    }

    FusionProblem p = assemble_problem(cfg, scene, data, threads);
    SolverConfig scfg = cfg.solver.solver(phase, threads);
    scfg.auto_scale = cfg.coherence.auto_scale;
    const SolveResult res = solve(p, scfg);

    const fs::path dir = run_dir / kReconstructionDir;
    fs::create_directories(dir);
    std::vector<std::string> names;
    const Grid2D& og = scene.source.profile.grid;
    write_matrix_csv(dir / "reconstruction_raw.csv", res.profile, og.x.count, og.y.count);
    names.push_back("reconstruction_raw.csv");
    const auto clamped = clamp_unit(res.profile);
    write_matrix_csv(dir / "reconstruction.csv", clamped, og.x.count, og.y.count);
    names.push_back("reconstruction.csv");
    write_pgm(dir / "reconstruction.pgm", clamped, og.x.count, og.y.count);
    names.push_back("reconstruction.pgm");
    write_matrix_csv(dir / "coefficients.csv", res.state.x, og.x.count, og.y.count);
    names.push_back("coefficients.csv");
    std::vector<double> logmag(res.state.x.size());
    for (std::size_t i = 0; i < logmag.size(); ++i)
      logmag[i] = std::log10(1.0 + std::abs(res.state.x[i]));
    write_pgm(dir / "coefficients.pgm", logmag, og.x.count, og.y.count,
              "scale=log10(1+|coef|)");
    names.push_back("coefficients.pgm");

    {
      std::ofstream f(dir / "solve_summary.txt", std::ios::binary);
      if (!f) throw std::runtime_error("cannot open solve_summary.txt");
      f << "converged = " << (res.converged ? "true" : "false") << "\n"
        << "beta_degenerate = " << (res.beta_degenerate ? "true" : "false") << "\n"
        << "outer = " << res.state.outer << "\n"
        << "alpha = " << format_double(res.state.alpha) << "\n"
        << "beta = " << format_double(res.state.beta) << "\n"
        << "primal = " << format_double(res.state.primal) << "\n"
        << "dual = " << format_double(res.state.dual) << "\n";
    }
    names.push_back("solve_summary.txt");

    if (fs::exists(mdir / "truth.csv")) {
      const auto truth = read_matrix_csv(mdir / "truth.csv", og.x.count, og.y.count);
      std::ofstream f(dir / "mse.txt", std::ios::binary);
      if (!f) throw std::runtime_error("cannot open mse.txt");
      f << format_double(mse(res.profile, truth)) << "\n";
      names.push_back("mse.txt");
    }
    // solve_log.csv carries wall-clock timings, so it stays out of the
    // manifest to keep listed artifacts byte-reproducible.
    write_solve_log(dir / "solve_log.csv", res);
    finalize_manifest(dir, base_manifest("reconstruct", cfg, 0, threads), names);
  });
}

int cmd_nullmap(const fs::path& config_path, const fs::path& run_dir, int threads) {
  return run_guarded("nullmap", [&] {
    const ScenarioConfig cfg = load_config(config_path);
    const BuiltScene scene = build_scene(cfg, config_path.parent_path());
    const fs::path dir = run_dir / kNullmapDir;
    fs::create_directories(dir);
    std::vector<std::string> names;
    const Grid2D& og = scene.source.profile.grid;
    const auto basis = make_basis(cfg.solver.basis, og);

    auto emit = [&](const std::string& stem, const std::vector<double>& map) {
      write_matrix_csv(dir / (stem + ".csv"), map, og.x.count, og.y.count);
      names.push_back(stem + ".csv");
      write_pgm(dir / (stem + ".pgm"), map, og.x.count, og.y.count);
      names.push_back(stem + ".pgm");
    };

    std::vector<double> img_comb, basis_comb;
    if (cfg.intensity.enabled) {
      const auto op = make_intensity_op(cfg, scene);
      img_comb = null_map_image(*op);
      basis_comb = null_map_basis(*op, *basis, threads);
      emit("nullmap_image_intensity", img_comb);
      emit("nullmap_basis_intensity", basis_comb);
    }
    if (cfg.coherence.enabled && !scene.r_positions.empty()) {
      std::vector<double> img_c, basis_c;
      for (std::size_t i = 0; i < scene.r_positions.size(); ++i) {
        const auto op = make_coherence_op(cfg, scene, i);
        const auto im = null_map_image(*op);
        const auto bm = null_map_basis(*op, *basis, threads);
        img_c = img_c.empty() ? im : combine_maps(img_c, im);
        basis_c = basis_c.empty() ? bm : combine_maps(basis_c, bm);
      }
      emit("nullmap_image_coherence", img_c);
      emit("nullmap_basis_coherence", basis_c);
      img_comb = img_comb.empty() ? img_c : combine_maps(img_comb, img_c);
      basis_comb = basis_comb.empty() ? basis_c : combine_maps(basis_comb, basis_c);
    }
    if (!img_comb.empty()) {
      emit("nullmap_image_combined", img_comb);
      emit("nullmap_basis_combined", basis_comb);
    }
    finalize_manifest(dir, base_manifest("nullmap", cfg, 0, threads), names);
  });
}

int cmd_weights(const fs::path& config_path, const fs::path& run_dir, int threads) {
  return run_guarded("weights", [&] {
    const ScenarioConfig cfg = load_config(config_path);
    const BuiltScene scene = build_scene(cfg, config_path.parent_path());
    const fs::path dir = run_dir / kWeightsDir;
    fs::create_directories(dir);
    std::vector<std::string> names;

    // Terms carry only operators and noise levels; Eq-15 needs no data.
    std::vector<MeasurementTerm> terms;
    std::vector<std::string> term_names;
    if (cfg.intensity.enabled) {
      MeasurementTerm t;
      t.op = make_intensity_op(cfg, scene);
      t.noise_sigma = cfg.intensity.noise_sigma;
      terms.push_back(std::move(t));
      term_names.push_back("intensity");
    }
    if (cfg.coherence.enabled) {
      for (std::size_t i = 0; i < scene.r_positions.size(); ++i) {
        MeasurementTerm t;
        t.op = make_coherence_op(cfg, scene, i);
        t.noise_sigma = cfg.coherence.noise_sigma;
        terms.push_back(std::move(t));
        term_names.push_back(index_name("coherence_", i, ""));
      }
    }

    std::string summary = "term,outputs,kept,fraction\n";
    for (std::size_t i = 0; i < terms.size(); ++i) {
      const bool is_intensity = terms[i].op->has_ambient();
      const std::string& tgt = cfg.weighting.target;
      if (tgt == "intensity" && !is_intensity) continue;
      if (tgt == "coherence" && is_intensity) continue;
      bool trivial = false;
      const auto w = sample_weights(terms, i, cfg.weighting.kappa, threads, &trivial);
      if (trivial) std::cerr << "weights: fewer than two terms, keeping all samples\n";
      double kept = 0.0;
      for (double v : w) kept += v;

      std::string fname = "weights_" + term_names[i] + ".csv";
      if (is_intensity) {
        write_matrix_csv(dir / fname, w, scene.intensity_grid.x.count,
                         scene.intensity_grid.y.count);
      } else {
        // unpack to the full ρ-grid (masked entries 0) for a regular matrix
        const auto* cop = static_cast<const CoherenceOperator*>(terms[i].op.get());
        std::vector<double> full(scene.rho_grid.size(), 0.0);
        const auto mask = cop->mask();
        std::size_t j = 0;
        for (std::size_t q = 0; q < mask.size(); ++q)
          if (mask[q]) full[q] = w[j++];
        write_matrix_csv(dir / fname, full, scene.rho_grid.x.count,
                         scene.rho_grid.y.count);
      }
      names.push_back(fname);
      summary += term_names[i] + "," + std::to_string(w.size()) + "," +
                 format_double(kept) + "," +
                 format_double(w.empty() ? 0.0 : kept / static_cast<double>(w.size())) +
                 "\n";
    }
    {
      std::ofstream f(dir / "weights_summary.csv", std::ios::binary);
      if (!f) throw std::runtime_error("cannot open weights_summary.csv");
      f << summary;
    }
    names.push_back("weights_summary.csv");
    finalize_manifest(dir, base_manifest("weights", cfg, 0, threads), names);
  });
}

int cmd_sweep(const fs::path& config_path, const fs::path& run_dir, std::uint64_t seed,
              int threads) {
  return run_guarded("sweep", [&] {
    const ScenarioConfig cfg = load_config(config_path);
    const BuiltScene scene = build_scene(cfg, config_path.parent_path());
    const fs::path dir = run_dir / kSweepDir;
    fs::create_directories(dir);

    const auto& lambdas = cfg.sweep.lambda_s;
    const auto& noises = cfg.sweep.noise;
    const int trials = cfg.sweep.trials;
    if (lambdas.empty() || noises.empty() || trials < 1)
      throw std::invalid_argument("sweep needs lambda_s, noise, and trials >= 1");

    std::string cells = "lambda_s,noise,trial,mse\n";
    std::vector<double> mean(lambdas.size() * noises.size(), 0.0);
    std::vector<double> sd(lambdas.size() * noises.size(), 0.0);
    for (std::size_t li = 0; li < lambdas.size(); ++li)
      for (std::size_t ni = 0; ni < noises.size(); ++ni) {
        const std::size_t cell = li * noises.size() + ni;
        ScenarioConfig c2 = cfg;
        c2.solver.lambda_s = lambdas[li];
        if (cfg.sweep.vary == "coherence")
          c2.coherence.noise_sigma = noises[ni];
        else
          c2.intensity.noise_sigma = noises[ni];
        double acc = 0.0, acc2 = 0.0;
        for (int tr = 0; tr < trials; ++tr) {
          const std::uint64_t cell_seed =
              derive_seed(derive_seed(seed, 1000 + cell), static_cast<std::uint64_t>(tr));
          const SimulatedData data = simulate_measurements(scene, c2, cell_seed, threads);
          FusionProblem p = assemble_problem(c2, scene, data, threads);
          SolverConfig scfg = c2.solver.solver(0, threads);
          scfg.auto_scale = c2.coherence.auto_scale;
          const SolveResult res = solve(p, scfg);
          const double m = mse(res.profile, data.truth.values);
          acc += m;
          acc2 += m * m;
          cells += format_double(lambdas[li]) + "," + format_double(noises[ni]) + "," +
                   std::to_string(tr) + "," + format_double(m) + "\n";
        }
        const double mu = acc / trials;
        mean[cell] = mu;
        sd[cell] = trials > 1 ? std::sqrt(std::max(0.0, (acc2 - trials * mu * mu) /
                                                            (trials - 1)))
                              : 0.0;
      }

    write_matrix_csv(dir / "sweep_mean.csv", mean, noises.size(), lambdas.size());
    write_matrix_csv(dir / "sweep_sd.csv", sd, noises.size(), lambdas.size());
    {
      std::ofstream f(dir / "sweep_cells.csv", std::ios::binary);
      if (!f) throw std::runtime_error("cannot open sweep_cells.csv");
      f << cells;
    }
    finalize_manifest(dir, base_manifest("sweep", cfg, seed, threads),
                      {"sweep_mean.csv", "sweep_sd.csv", "sweep_cells.csv"});
  });
}

}  // namespace nlos
