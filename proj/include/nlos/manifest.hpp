#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace nlos {

struct ArtifactEntry {
  std::string name;       // path relative to the manifest's directory
  std::uint64_t checksum; // FNV-1a 64 over file bytes
};

struct Manifest {
  std::string command;
  std::uint64_t config_hash = 0;
  std::uint64_t seed = 0;
  int threads = 1;
  std::string kernels;  // active kernel table name
  std::vector<ArtifactEntry> artifacts;
};

// Serialized as JSON with sorted artifact names; hashes as fixed-width hex.
std::string serialize_manifest(const Manifest& m);
Manifest parse_manifest(const std::string& text);
void write_manifest(const std::filesystem::path& path, const Manifest& m);
Manifest load_manifest(const std::filesystem::path& path);

// Checksums `names` (relative to dir) and writes dir/manifest.json.
void finalize_manifest(const std::filesystem::path& dir, Manifest m,
                       std::vector<std::string> names);

}  // namespace nlos
