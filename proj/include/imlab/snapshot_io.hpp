#pragma once

#include "imlab/grid.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>

namespace imlab {

// Binary field snapshot, all integers and floats little-endian:
//   "IMLB" | version u32 | n u32 | M u32 | L_box f64 | space u8 (0 phys, 1 freq)
//   then M^n (re, im) f64 pairs, axis 0 slowest.
inline constexpr std::uint32_t kSnapshotVersion = 1;
inline constexpr std::size_t kSnapshotHeaderBytes = 4 + 4 + 4 + 4 + 8 + 1;

void write_snapshot(std::ostream& out, const SpectralField& field);
SpectralField read_snapshot(std::istream& in);

void save_snapshot(const std::filesystem::path& path, const SpectralField& field);
SpectralField load_snapshot(const std::filesystem::path& path);

}  // namespace imlab
