#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "nrcdt/measures.hpp"
#include "nrcdt/raster.hpp"

namespace nrcdt::io {

/// "NRCDT1" followed by a NUL byte.
inline constexpr std::string_view kAtomMagic{"NRCDT1\0", 7};

/// Lossless binary measure format: magic, u64 atom count, then count triples
/// (f64 x, f64 y, f64 w), all little-endian.
void write_atoms(std::ostream& out, const DiscreteMeasure2D& m);
[[nodiscard]] DiscreteMeasure2D read_atoms(std::istream& in, std::string_view source = "<stream>");

/// PGM reader for P2 (ASCII) and P5 (binary, 8- or 16-bit) images.
[[nodiscard]] Raster read_pgm(std::istream& in, std::string_view source = "<stream>");
/// 8-bit P5 writer; intensities are scaled so the maximum maps to 255.
void write_pgm(std::ostream& out, const Raster& image);

/// Rows of comma-separated nonnegative intensities; blank lines are skipped.
[[nodiscard]] Raster read_csv_grid(std::istream& in, std::string_view source = "<stream>");
void write_csv_grid(std::ostream& out, const Raster& image);

[[nodiscard]] DiscreteMeasure2D read_atoms_file(const std::filesystem::path& path);
[[nodiscard]] Raster read_pgm_file(const std::filesystem::path& path);
[[nodiscard]] Raster read_csv_grid_file(const std::filesystem::path& path);

/// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

[[nodiscard]] std::string read_file(const std::filesystem::path& path);

}  // namespace nrcdt::io
