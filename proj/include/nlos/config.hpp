#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "nlos/admm.hpp"
#include "nlos/grid.hpp"
#include "nlos/scene.hpp"

namespace nlos {

struct GridSpec {
  std::size_t nx = 1, ny = 1;
  double x_lo = 0, x_hi = 0, y_lo = 0, y_hi = 0;
  Grid2D grid() const;
  bool operator==(const GridSpec&) const = default;
};

struct SceneSection {
  double wavelength = 525e-6;
  double distance = 6.0;
  double coherence_width = 2.5e-6;
  SceneGeometry geometry() const { return {wavelength, distance, coherence_width}; }
  bool operator==(const SceneSection&) const = default;
};

// Coherence attenuation widths in meters; Eq-5 σ = (1 μm)/width.
struct WallSection {
  double attenuation_width_x = 1e-6;
  double attenuation_width_y = 6e-6;
  WallScattering scattering() const;
  bool operator==(const WallSection&) const = default;
};

struct ObjectSection {
  std::string mode = "opaque";  // opaque | reflective
  GridSpec grid{101, 101, -2, 2, -2, 2};
  std::string source = "star";  // star | csv
  std::size_t star_points = 5;
  double star_outer = 1.5;
  double star_inner = 0.6;
  double star_center_x = 0.0;
  double star_center_y = 0.0;
  std::string csv_path;
  double extension_extent = 6.0;
  SourceMode source_mode() const;
  bool operator==(const ObjectSection&) const = default;
};

struct IntensitySection {
  bool enabled = true;
  GridSpec grid{101, 101, -2, 2, -2, 2};
  double ambient = 100.0;
  double noise_sigma = 0.0;
  double weight = 1.0;
  bool operator==(const IntensitySection&) const = default;
};

struct CoherenceSection {
  bool enabled = true;
  GridSpec rho_grid{51, 51, -1e-5, 1e-5, -1e-5, 1e-5};
  double exclusion_radius = 1e-6;
  GridSpec r_grid{7, 7, -2, 2, -2, 2};  // nx = 0 disables the regular grid
  std::vector<Vec2> r_points;           // appended explicit sample positions
  double noise_sigma = 0.0;
  double weight = 1.0;  // λ_m
  bool auto_scale = false;
  std::vector<Vec2> sample_positions() const;
  bool operator==(const CoherenceSection&) const = default;
};

struct SolverSection {
  double lambda_s = 1e-3;
  double mu = 5e-3;
  int max_outer = 500;
  int max_inner = 200;
  bool estimate_ambient = true;
  std::string basis = "dct";          // dct | identity
  std::string lambda_mode = "fixed";  // fixed | inv_norm2 (λ_i = 1/‖y_i‖²)
  PhaseThresholds phase1{1.0, 1e-4, 1e-3};
  PhaseThresholds phase2{0.5, 1e-6, 1e-8};
  SolverConfig solver(int phase, int threads) const;
  bool operator==(const SolverSection&) const = default;
};

struct WeightingSection {
  bool enabled = false;
  double kappa = 0.25;
  std::string target = "intensity";  // intensity | coherence | all
  bool operator==(const WeightingSection&) const = default;
};

struct SweepSection {
  std::vector<double> lambda_s{0, 0.0005, 0.005, 0.05, 0.5};
  std::vector<double> noise{0, 0.01, 0.05, 0.1};
  std::string vary = "coherence";  // which modality the noise list drives
  int trials = 10;
  bool operator==(const SweepSection&) const = default;
};

struct ScenarioConfig {
  SceneSection scene;
  WallSection wall;
  ObjectSection object;
  IntensitySection intensity;
  CoherenceSection coherence;
  SolverSection solver;
  WeightingSection weighting;
  SweepSection sweep;
  bool operator==(const ScenarioConfig&) const = default;
};

// INI-style text: [section], key = value, '#' comments.  Unknown sections or
// keys and malformed values raise ConfigError carrying the line number.
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::filesystem::path& path);
// Canonical form: fixed section/key order, shortest round-trip numbers.
// parse(serialize(c)) == c.
std::string serialize_config(const ScenarioConfig& c);
std::uint64_t config_hash(const ScenarioConfig& c);

}  // namespace nlos
