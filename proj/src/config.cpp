#include "nlos/config.hpp"

#include <fstream>
#include <sstream>

#include "nlos/errors.hpp"
#include "nlos/io_csv.hpp"

namespace nlos {

Grid2D GridSpec::grid() const { return make_grid(x_lo, x_hi, nx, y_lo, y_hi, ny); }

WallScattering WallSection::scattering() const {
  // width in meters -> σ in (μm)⁻¹
  return {1.0 / (attenuation_width_x * 1e6), 1.0 / (attenuation_width_y * 1e6)};
}

SourceMode ObjectSection::source_mode() const {
  if (mode == "opaque") return SourceMode::opaque;
  if (mode == "reflective") return SourceMode::reflective;
  throw std::invalid_argument("unknown object mode: " + mode);
}

std::vector<Vec2> CoherenceSection::sample_positions() const {
  std::vector<Vec2> out;
  if (r_grid.nx > 0 && r_grid.ny > 0) {
    const Grid2D g = r_grid.grid();
    for (std::size_t iy = 0; iy < g.y.count; ++iy)
      for (std::size_t ix = 0; ix < g.x.count; ++ix)
        out.push_back({g.x.coord(ix), g.y.coord(iy)});
  }
  out.insert(out.end(), r_points.begin(), r_points.end());
  return out;
}

SolverConfig SolverSection::solver(int phase, int threads) const {
  SolverConfig c;
  c.lambda_s = lambda_s;
  c.mu = mu;
  c.max_outer = max_outer;
  c.max_inner = max_inner;
  c.phase1 = phase1;
  c.phase2 = phase2;
  c.phase = phase;
  c.estimate_ambient = estimate_ambient;
  c.threads = threads;
  return c;
}

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && (s[a] == ' ' || s[a] == '\t' || s[a] == '\r')) ++a;
  while (b > a && (s[b - 1] == ' ' || s[b - 1] == '\t' || s[b - 1] == '\r')) --b;
  return s.substr(a, b - a);
}

std::vector<std::string> tokenize(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream ss(s);
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

bool parse_bool(const std::string& v, int line) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError("invalid boolean '" + v + "'", line);
}

std::size_t parse_size(const std::string& v, int line) {
  const double d = parse_double(v, line);
  if (d < 0 || d != static_cast<double>(static_cast<std::size_t>(d)))
    throw ConfigError("invalid count '" + v + "'", line);
  return static_cast<std::size_t>(d);
}

int parse_int(const std::string& v, int line) {
  const double d = parse_double(v, line);
  if (d != static_cast<double>(static_cast<int>(d)))
    throw ConfigError("invalid integer '" + v + "'", line);
  return static_cast<int>(d);
}

GridSpec parse_grid(const std::string& v, int line) {
  const auto t = tokenize(v);
  if (t.size() != 6)
    throw ConfigError("grid needs 'nx ny x_lo x_hi y_lo y_hi'", line);
  GridSpec g;
  g.nx = parse_size(t[0], line);
  g.ny = parse_size(t[1], line);
  g.x_lo = parse_double(t[2], line);
  g.x_hi = parse_double(t[3], line);
  g.y_lo = parse_double(t[4], line);
  g.y_hi = parse_double(t[5], line);
  return g;
}

PhaseThresholds parse_thresholds(const std::string& v, int line) {
  const auto t = tokenize(v);
  if (t.size() != 3)
    throw ConfigError("phase needs 'eps_primal eps_dual eps_grad'", line);
  return {parse_double(t[0], line), parse_double(t[1], line), parse_double(t[2], line)};
}

std::vector<double> parse_list(const std::string& v, int line) {
  const auto t = tokenize(v);
  if (t.empty()) throw ConfigError("empty list", line);
  std::vector<double> out;
  out.reserve(t.size());
  for (const auto& s : t) out.push_back(parse_double(s, line));
  return out;
}

std::string check_choice(const std::string& v, std::initializer_list<const char*> opts,
                         int line) {
  for (const char* o : opts)
    if (v == o) return v;
  throw ConfigError("invalid value '" + v + "'", line);
}

std::string grid_str(const GridSpec& g) {
  return std::to_string(g.nx) + " " + std::to_string(g.ny) + " " +
         format_double(g.x_lo) + " " + format_double(g.x_hi) + " " +
         format_double(g.y_lo) + " " + format_double(g.y_hi);
}

std::string thresholds_str(const PhaseThresholds& t) {
  return format_double(t.eps_primal) + " " + format_double(t.eps_dual) + " " +
         format_double(t.eps_grad);
}

std::string list_str(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ' ';
    s += format_double(v[i]);
  }
  return s;
}

const char* bool_str(bool b) { return b ? "true" : "false"; }

}  // namespace

ScenarioConfig parse_config(const std::string& text) {
  ScenarioConfig c;
  std::string section;
  std::istringstream ss(text);
  std::string raw;
  int line = 0;
  bool saw_r_item = false;  // first r_grid/r_point wins over the default grid
  while (std::getline(ss, raw)) {
    ++line;
    const std::string s = trim(raw);
    if (s.empty() || s[0] == '#') continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ConfigError("unterminated section header", line);
      section = s.substr(1, s.size() - 2);
      if (section != "scene" && section != "wall" && section != "object" &&
          section != "intensity" && section != "coherence" && section != "solver" &&
          section != "weighting" && section != "sweep")
        throw ConfigError("unknown section [" + section + "]", line);
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("expected 'key = value'", line);
    const std::string key = trim(s.substr(0, eq));
    const std::string val = trim(s.substr(eq + 1));
    if (section.empty()) throw ConfigError("key before any [section]", line);

    if (section == "scene") {
      if (key == "wavelength")
        c.scene.wavelength = parse_double(val, line);
      else if (key == "distance")
        c.scene.distance = parse_double(val, line);
      else if (key == "coherence_width")
        c.scene.coherence_width = parse_double(val, line);
      else
        throw ConfigError("unknown key '" + key + "' in [scene]", line);
    } else if (section == "wall") {
      if (key == "attenuation_width_x")
        c.wall.attenuation_width_x = parse_double(val, line);
      else if (key == "attenuation_width_y")
        c.wall.attenuation_width_y = parse_double(val, line);
      else
        throw ConfigError("unknown key '" + key + "' in [wall]", line);
    } else if (section == "object") {
      if (key == "mode")
        c.object.mode = check_choice(val, {"opaque", "reflective"}, line);
      else if (key == "grid")
        c.object.grid = parse_grid(val, line);
      else if (key == "source")
        c.object.source = check_choice(val, {"star", "csv"}, line);
      else if (key == "star_points")
        c.object.star_points = parse_size(val, line);
      else if (key == "star_outer")
        c.object.star_outer = parse_double(val, line);
      else if (key == "star_inner")
        c.object.star_inner = parse_double(val, line);
      else if (key == "star_center_x")
        c.object.star_center_x = parse_double(val, line);
      else if (key == "star_center_y")
        c.object.star_center_y = parse_double(val, line);
      else if (key == "csv_path")
        c.object.csv_path = val;
      else if (key == "extension_extent")
        c.object.extension_extent = parse_double(val, line);
      else
        throw ConfigError("unknown key '" + key + "' in [object]", line);
    } else if (section == "intensity") {
      if (key == "enabled")
        c.intensity.enabled = parse_bool(val, line);
      else if (key == "grid")
        c.intensity.grid = parse_grid(val, line);
      else if (key == "ambient")
        c.intensity.ambient = parse_double(val, line);
      else if (key == "noise_sigma")
        c.intensity.noise_sigma = parse_double(val, line);
      else if (key == "weight")
        c.intensity.weight = parse_double(val, line);
      else
        throw ConfigError("unknown key '" + key + "' in [intensity]", line);
    } else if (section == "coherence") {
      if (key == "enabled")
        c.coherence.enabled = parse_bool(val, line);
      else if (key == "rho_grid")
        c.coherence.rho_grid = parse_grid(val, line);
      else if (key == "exclusion_radius")
        c.coherence.exclusion_radius = parse_double(val, line);
      else if (key == "r_grid") {
        c.coherence.r_grid = parse_grid(val, line);
        saw_r_item = true;
      } else if (key == "r_point") {
        const auto t = tokenize(val);
        if (t.size() != 2) throw ConfigError("r_point needs 'x y'", line);
        if (!saw_r_item) {
          c.coherence.r_grid = GridSpec{0, 0, 0, 0, 0, 0};  // explicit points only
          saw_r_item = true;
        }
        c.coherence.r_points.push_back(
            {parse_double(t[0], line), parse_double(t[1], line)});
      } else if (key == "noise_sigma")
        c.coherence.noise_sigma = parse_double(val, line);
      else if (key == "weight")
        c.coherence.weight = parse_double(val, line);
      else if (key == "auto_scale")
        c.coherence.auto_scale = parse_bool(val, line);
      else
        throw ConfigError("unknown key '" + key + "' in [coherence]", line);
    } else if (section == "solver") {
      if (key == "lambda_s")
        c.solver.lambda_s = parse_double(val, line);
      else if (key == "mu")
        c.solver.mu = parse_double(val, line);
      else if (key == "max_outer")
        c.solver.max_outer = parse_int(val, line);
      else if (key == "max_inner")
        c.solver.max_inner = parse_int(val, line);
      else if (key == "estimate_ambient")
        c.solver.estimate_ambient = parse_bool(val, line);
      else if (key == "basis")
        c.solver.basis = check_choice(val, {"dct", "identity"}, line);
      else if (key == "lambda_mode")
        c.solver.lambda_mode = check_choice(val, {"fixed", "inv_norm2"}, line);
      else if (key == "phase1")
        c.solver.phase1 = parse_thresholds(val, line);
      else if (key == "phase2")
        c.solver.phase2 = parse_thresholds(val, line);
      else
        throw ConfigError("unknown key '" + key + "' in [solver]", line);
    } else if (section == "weighting") {
      if (key == "enabled")
        c.weighting.enabled = parse_bool(val, line);
      else if (key == "kappa")
        c.weighting.kappa = parse_double(val, line);
      else if (key == "target")
        c.weighting.target = check_choice(val, {"intensity", "coherence", "all"}, line);
      else
        throw ConfigError("unknown key '" + key + "' in [weighting]", line);
    } else if (section == "sweep") {
      if (key == "lambda_s")
        c.sweep.lambda_s = parse_list(val, line);
      else if (key == "noise")
        c.sweep.noise = parse_list(val, line);
      else if (key == "vary")
        c.sweep.vary = check_choice(val, {"intensity", "coherence"}, line);
      else if (key == "trials")
        c.sweep.trials = parse_int(val, line);
      else
        throw ConfigError("unknown key '" + key + "' in [sweep]", line);
    }
  }
  return c;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open config: " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const ScenarioConfig& c) {
  std::string s;
  s += "[scene]\n";
  s += "wavelength = " + format_double(c.scene.wavelength) + "\n";
  s += "distance = " + format_double(c.scene.distance) + "\n";
  s += "coherence_width = " + format_double(c.scene.coherence_width) + "\n";
  s += "\n[wall]\n";
  s += "attenuation_width_x = " + format_double(c.wall.attenuation_width_x) + "\n";
  s += "attenuation_width_y = " + format_double(c.wall.attenuation_width_y) + "\n";
  s += "\n[object]\n";
  s += "mode = " + c.object.mode + "\n";
  s += "grid = " + grid_str(c.object.grid) + "\n";
  s += "source = " + c.object.source + "\n";
  s += "star_points = " + std::to_string(c.object.star_points) + "\n";
  s += "star_outer = " + format_double(c.object.star_outer) + "\n";
  s += "star_inner = " + format_double(c.object.star_inner) + "\n";
  s += "star_center_x = " + format_double(c.object.star_center_x) + "\n";
  s += "star_center_y = " + format_double(c.object.star_center_y) + "\n";
  if (!c.object.csv_path.empty()) s += "csv_path = " + c.object.csv_path + "\n";
  s += "extension_extent = " + format_double(c.object.extension_extent) + "\n";
  s += "\n[intensity]\n";
  s += "enabled = " + std::string(bool_str(c.intensity.enabled)) + "\n";
  s += "grid = " + grid_str(c.intensity.grid) + "\n";
  s += "ambient = " + format_double(c.intensity.ambient) + "\n";
  s += "noise_sigma = " + format_double(c.intensity.noise_sigma) + "\n";
  s += "weight = " + format_double(c.intensity.weight) + "\n";
  s += "\n[coherence]\n";
  s += "enabled = " + std::string(bool_str(c.coherence.enabled)) + "\n";
  s += "rho_grid = " + grid_str(c.coherence.rho_grid) + "\n";
  s += "exclusion_radius = " + format_double(c.coherence.exclusion_radius) + "\n";
  s += "r_grid = " + grid_str(c.coherence.r_grid) + "\n";
  for (const Vec2& p : c.coherence.r_points)
    s += "r_point = " + format_double(p.x) + " " + format_double(p.y) + "\n";
  s += "noise_sigma = " + format_double(c.coherence.noise_sigma) + "\n";
  s += "weight = " + format_double(c.coherence.weight) + "\n";
  s += "auto_scale = " + std::string(bool_str(c.coherence.auto_scale)) + "\n";
  s += "\n[solver]\n";
  s += "lambda_s = " + format_double(c.solver.lambda_s) + "\n";
  s += "mu = " + format_double(c.solver.mu) + "\n";
  s += "max_outer = " + std::to_string(c.solver.max_outer) + "\n";
  s += "max_inner = " + std::to_string(c.solver.max_inner) + "\n";
  s += "estimate_ambient = " + std::string(bool_str(c.solver.estimate_ambient)) + "\n";
  s += "basis = " + c.solver.basis + "\n";
  s += "lambda_mode = " + c.solver.lambda_mode + "\n";
  s += "phase1 = " + thresholds_str(c.solver.phase1) + "\n";
  s += "phase2 = " + thresholds_str(c.solver.phase2) + "\n";
  s += "\n[weighting]\n";
  s += "enabled = " + std::string(bool_str(c.weighting.enabled)) + "\n";
  s += "kappa = " + format_double(c.weighting.kappa) + "\n";
  s += "target = " + c.weighting.target + "\n";
  s += "\n[sweep]\n";
  s += "lambda_s = " + list_str(c.sweep.lambda_s) + "\n";
  s += "noise = " + list_str(c.sweep.noise) + "\n";
  s += "vary = " + c.sweep.vary + "\n";
  s += "trials = " + std::to_string(c.sweep.trials) + "\n";
  return s;
}

std::uint64_t config_hash(const ScenarioConfig& c) {
  return fnv1a64_str(serialize_config(c));
}

}  // namespace nlos
