#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "ifp/grid.hpp"
#include "ifp/tpe.hpp"

namespace ifp {

// IFPM raw matrix layout, all little-endian:
//   offset 0   "IFPM"
//   offset 4   u16 version (1)
//   offset 6   u16 reserved (0)
//   offset 8   u32 rows
//   offset 12  u32 cols
//   offset 16  rows * cols f64 samples, row-major
inline constexpr std::size_t kMatrixHeaderSize = 16;
inline constexpr std::uint16_t kMatrixVersion = 1;

std::string encode_matrix_bytes(const ImageGrid& img);
ImageGrid decode_matrix_bytes(std::string_view bytes, double pixel_pitch_um = 1.0);

void encode_matrix(const ImageGrid& img, const std::filesystem::path& path);
/// The format carries no pitch; callers supply it.
ImageGrid decode_matrix(const std::filesystem::path& path, double pixel_pitch_um = 1.0);

/// 16-bit binary PGM (P5, maxval 65535, big-endian samples), min-max scaled.
/// A constant image maps to zeros.
std::string encode_pgm_bytes(const ImageGrid& img);
void write_pgm(const ImageGrid& img, const std::filesystem::path& path);

/// Rows of `frame,dx_px,dy_px,confidence`. Confidence is NaN when unknown
/// (written as an empty field).
struct PositionTable {
  std::vector<ShiftVector> shifts;
  std::vector<double> confidence;
};

inline constexpr std::string_view kPositionsHeader = "frame,dx_px,dy_px,confidence";

std::string encode_positions_csv(const PositionTable& table);
PositionTable decode_positions_csv(std::string_view text);

void write_positions_csv(const PositionTable& table, const std::filesystem::path& path);
void write_positions_csv(const ExtractionResult& result, const std::filesystem::path& path);
/// Ground truth has no confidence column values.
void write_positions_csv(const std::vector<ShiftVector>& shifts, const std::filesystem::path& path);
PositionTable read_positions_csv(const std::filesystem::path& path);

/// Writes through a temporary sibling file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view bytes);
std::string read_file(const std::filesystem::path& path);

}  // namespace ifp
