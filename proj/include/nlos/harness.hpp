#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "nlos/admm.hpp"
#include "nlos/config.hpp"
#include "nlos/forward.hpp"
#include "nlos/scene.hpp"

namespace nlos {

// Run-directory layout: each command owns one subdirectory of the run dir
// and writes a manifest.json listing its artifacts.
inline constexpr const char* kMeasurementsDir = "measurements";
inline constexpr const char* kReconstructionDir = "reconstruction";
inline constexpr const char* kNullmapDir = "nullmaps";
inline constexpr const char* kWeightsDir = "weights";
inline constexpr const char* kSweepDir = "sweep";

struct BuiltScene {
  SceneGeometry geom;
  WallScattering wall;
  SourceField source;  // truth opacity + extension + mode
  Grid2D intensity_grid;
  Grid2D rho_grid;
  double exclusion_radius = 0;
  std::vector<Vec2> r_positions;
};

// csv-sourced truth profiles resolve csv_path against base_dir.
BuiltScene build_scene(const ScenarioConfig& cfg,
                       const std::filesystem::path& base_dir = {});

struct SimulatedData {
  OpacityProfile truth;
  IntensityImage intensity_noiseless, intensity;
  std::vector<CoherenceSample> coherence_noiseless, coherence;
};

// Sub-seed scheme: intensity noise uses derive_seed(seed, 1); coherence
// sample i uses derive_seed(seed, 100 + i).
SimulatedData simulate_measurements(const BuiltScene& scene,
                                    const ScenarioConfig& cfg,
                                    std::uint64_t seed, int threads);

// Measurement terms from simulated (noisy) data; honors enabled flags,
// weights, lambda_mode, auto_scale, and Eq-15 sample weighting when
// cfg.weighting.enabled.
FusionProblem assemble_problem(const ScenarioConfig& cfg,
                               const BuiltScene& scene,
                               const SimulatedData& data, int threads);

// Commands return process exit codes: 0 ok, 2 config error, 3 I/O error,
// 4 numerical failure.  Errors are reported on stderr.
int cmd_simulate(const std::filesystem::path& config_path,
                 const std::filesystem::path& run_dir, std::uint64_t seed,
                 int threads);
int cmd_reconstruct(const std::filesystem::path& config_path,
                    const std::filesystem::path& run_dir, int phase,
                    int threads);
int cmd_nullmap(const std::filesystem::path& config_path,
                const std::filesystem::path& run_dir, int threads);
int cmd_weights(const std::filesystem::path& config_path,
                const std::filesystem::path& run_dir, int threads);
int cmd_sweep(const std::filesystem::path& config_path,
              const std::filesystem::path& run_dir, std::uint64_t seed,
              int threads);

}  // namespace nlos
