#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "osg/grid.hpp"

// Grid files. Binary layout (little-endian):
//   "OSGGRID\0" | u32 format version | u64 header bytes | JSON header
//   | n_p doubles (p axis) | n_phi doubles (phi axis) | n_p * n_phi doubles (W, p outer, phi inner)
// CSV: a '#'-prefixed header line, then "p,phi,W" rows with 17 significant digits.
namespace osg {

inline constexpr std::uint32_t kGridFormatVersion = 1;

const char* tool_version();

/// The JSON header written for `grid`: shape, params, field/atom descriptions, cutoff,
/// captured weight, integral, ring weights and tool version. Contains nothing run-dependent.
std::string grid_header(const MomentumGrid& grid);

void write_grid_bin(const std::filesystem::path& path, const MomentumGrid& grid);
void write_grid_csv(const std::filesystem::path& path, const MomentumGrid& grid);

/// Throws Error(Io) on missing files, bad magic, unsupported versions or truncated payloads.
MomentumGrid read_grid_bin(const std::filesystem::path& path);
MomentumGrid read_grid_csv(const std::filesystem::path& path);

}  // namespace osg
