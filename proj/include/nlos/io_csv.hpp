#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "nlos/forward.hpp"

namespace nlos {

// Doubles are printed with shortest round-trip formatting ('.' decimal, LF
// line ends) so write/read cycles are bit-exact.
std::string format_double(double v);
double parse_double(const std::string& s, int line_for_error = 0);

// Matrix CSV: one comma-separated row per grid row (row-major).
void write_matrix_csv(const std::filesystem::path& path, std::span<const double> values,
                      std::size_t nx, std::size_t ny);
std::vector<double> read_matrix_csv(const std::filesystem::path& path, std::size_t nx,
                                    std::size_t ny);

// Coherence sample CSV: header rho_x,rho_y,re,im,mask, one row per ρ-grid
// point (row-major).
void write_coherence_csv(const std::filesystem::path& path, const CoherenceSample& s);
CoherenceSample read_coherence_csv(const std::filesystem::path& path, const Grid2D& rho_grid);

// 8-bit binary PGM, min–max normalized; the normalization is recorded in a
// header comment.
void write_pgm(const std::filesystem::path& path, std::span<const double> values,
               std::size_t nx, std::size_t ny, const std::string& note = {});

std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes);
std::uint64_t fnv1a64_str(const std::string& s);
std::uint64_t file_checksum(const std::filesystem::path& path);

}  // namespace nlos
