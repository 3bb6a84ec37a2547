#include "nlos/manifest.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "nlos/io_csv.hpp"

namespace nlos {

namespace {

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::uint64_t parse_hex64(const std::string& s) {
  return std::stoull(s, nullptr, 16);
}

}  // namespace

std::string serialize_manifest(const Manifest& m) {
  nlohmann::ordered_json j;
  j["command"] = m.command;
  j["config_hash"] = hex64(m.config_hash);
  j["seed"] = std::to_string(m.seed);
  j["threads"] = m.threads;
  j["kernels"] = m.kernels;
  auto arts = m.artifacts;
  std::sort(arts.begin(), arts.end(),
            [](const ArtifactEntry& a, const ArtifactEntry& b) { return a.name < b.name; });
  j["artifacts"] = nlohmann::ordered_json::array();
  for (const auto& a : arts)
    j["artifacts"].push_back({{"name", a.name}, {"fnv1a64", hex64(a.checksum)}});
  return j.dump(2) + "\n";
}

Manifest parse_manifest(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  Manifest m;
  m.command = j.at("command").get<std::string>();
  m.config_hash = parse_hex64(j.at("config_hash").get<std::string>());
  m.seed = std::stoull(j.at("seed").get<std::string>());
  m.threads = j.at("threads").get<int>();
  m.kernels = j.at("kernels").get<std::string>();
  for (const auto& a : j.at("artifacts"))
    m.artifacts.push_back({a.at("name").get<std::string>(),
                           parse_hex64(a.at("fnv1a64").get<std::string>())});
  return m;
}

void write_manifest(const std::filesystem::path& path, const Manifest& m) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path.string());
  f << serialize_manifest(m);
}

Manifest load_manifest(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for reading: " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_manifest(ss.str());
}

void finalize_manifest(const std::filesystem::path& dir, Manifest m,
                       std::vector<std::string> names) {
  m.artifacts.clear();
  for (const auto& n : names) m.artifacts.push_back({n, file_checksum(dir / n)});
  write_manifest(dir / "manifest.json", m);
}

}  // namespace nlos
