#include "nlos/io_csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "nlos/errors.hpp"

namespace nlos {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path.string());
  return f;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for reading: " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '\n') {
      std::size_t end = i;
      if (end > start && text[end - 1] == '\r') --end;
      out.push_back(text.substr(start, end - start));
      start = i + 1;
    }
  }
  if (start < text.size()) out.push_back(text.substr(start));
  return out;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& s, int line_for_error) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  while (first < last && (*first == ' ' || *first == '\t')) ++first;
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc{})
    throw ConfigError("invalid number '" + s + "'", line_for_error);
  for (const char* p = res.ptr; p < last; ++p)
    if (*p != ' ' && *p != '\t')
      throw ConfigError("trailing characters in number '" + s + "'", line_for_error);
  return v;
}

void write_matrix_csv(const std::filesystem::path& path, std::span<const double> values,
                      std::size_t nx, std::size_t ny) {
  if (values.size() != nx * ny) throw std::invalid_argument("matrix csv size mismatch");
  std::string out;
  out.reserve(values.size() * 12);
  for (std::size_t iy = 0; iy < ny; ++iy) {
    for (std::size_t ix = 0; ix < nx; ++ix) {
      if (ix) out += ',';
      out += format_double(values[iy * nx + ix]);
    }
    out += '\n';
  }
  open_out(path) << out;
}

std::vector<double> read_matrix_csv(const std::filesystem::path& path, std::size_t nx,
                                    std::size_t ny) {
  const auto rows = lines_of(slurp(path));
  if (rows.size() != ny)
    throw std::runtime_error(path.string() + ": expected " + std::to_string(ny) +
                             " rows, got " + std::to_string(rows.size()));
  std::vector<double> values(nx * ny);
  for (std::size_t iy = 0; iy < ny; ++iy) {
    const auto cells = split(rows[iy], ',');
    if (cells.size() != nx)
      throw std::runtime_error(path.string() + " row " + std::to_string(iy + 1) +
                               ": expected " + std::to_string(nx) + " columns");
    for (std::size_t ix = 0; ix < nx; ++ix)
      values[iy * nx + ix] = parse_double(cells[ix], static_cast<int>(iy + 1));
  }
  return values;
}

void write_coherence_csv(const std::filesystem::path& path, const CoherenceSample& s) {
  std::string out = "# r_x=" + format_double(s.r.x) + " r_y=" + format_double(s.r.y) +
                    " exclusion_radius=" + format_double(s.exclusion_radius) + "\n";
  out += "rho_x,rho_y,re,im,mask\n";
  for (std::size_t iy = 0; iy < s.rho_grid.y.count; ++iy)
    for (std::size_t ix = 0; ix < s.rho_grid.x.count; ++ix) {
      const std::size_t i = s.rho_grid.index(ix, iy);
      out += format_double(s.rho_grid.x.coord(ix));
      out += ',';
      out += format_double(s.rho_grid.y.coord(iy));
      out += ',';
      out += format_double(s.values[i].real());
      out += ',';
      out += format_double(s.values[i].imag());
      out += ',';
      out += s.mask[i] ? '1' : '0';
      out += '\n';
    }
  open_out(path) << out;
}

CoherenceSample read_coherence_csv(const std::filesystem::path& path,
                                   const Grid2D& rho_grid) {
  const auto rows = lines_of(slurp(path));
  if (rows.size() != rho_grid.size() + 2)
    throw std::runtime_error(path.string() + ": unexpected row count");
  CoherenceSample s;
  s.rho_grid = rho_grid;
  // metadata comment: "# r_x=<v> r_y=<v> exclusion_radius=<v>"
  {
    const auto fields = split(rows[0], ' ');
    for (const auto& f : fields) {
      const auto eq = f.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = f.substr(0, eq);
      const double v = parse_double(f.substr(eq + 1), 1);
      if (key == "r_x")
        s.r.x = v;
      else if (key == "r_y")
        s.r.y = v;
      else if (key == "exclusion_radius")
        s.exclusion_radius = v;
    }
  }
  if (rows[1] != "rho_x,rho_y,re,im,mask")
    throw std::runtime_error(path.string() + ": bad coherence header");
  s.values.resize(rho_grid.size());
  s.mask.resize(rho_grid.size());
  for (std::size_t i = 0; i < rho_grid.size(); ++i) {
    const auto cells = split(rows[i + 2], ',');
    if (cells.size() != 5)
      throw std::runtime_error(path.string() + ": bad coherence row " +
                               std::to_string(i + 3));
    const int line = static_cast<int>(i + 3);
    s.values[i] = cplx(parse_double(cells[2], line), parse_double(cells[3], line));
    s.mask[i] = cells[4] == "1" ? 1 : 0;
  }
  return s;
}

void write_pgm(const std::filesystem::path& path, std::span<const double> values,
               std::size_t nx, std::size_t ny, const std::string& note) {
  if (values.size() != nx * ny) throw std::invalid_argument("pgm size mismatch");
  double lo = values.empty() ? 0.0 : values[0];
  double hi = lo;
  for (double v : values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  std::string head = "P5\n# min=" + format_double(lo) + " max=" + format_double(hi) +
                     " map=linear";
  if (!note.empty()) head += " " + note;
  head += "\n" + std::to_string(nx) + " " + std::to_string(ny) + "\n255\n";
  std::string body(values.size(), '\0');
  const double span = hi - lo;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double t = span > 0.0 ? (values[i] - lo) / span : 0.0;
    body[i] = static_cast<char>(static_cast<unsigned char>(std::lround(t * 255.0)));
  }
  auto f = open_out(path);
  f << head;
  f.write(body.data(), static_cast<std::streamsize>(body.size()));
}

std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (std::uint8_t b : bytes) {
    h ^= b;
    h *= 1099511628211ULL;
  }
  return h;
}

std::uint64_t fnv1a64_str(const std::string& s) {
  return fnv1a64({reinterpret_cast<const std::uint8_t*>(s.data()), s.size()});
}

std::uint64_t file_checksum(const std::filesystem::path& path) {
  return fnv1a64_str(slurp(path));
}

}  // namespace nlos
