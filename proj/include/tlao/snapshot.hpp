#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "tlao/grid.hpp"

namespace tlao {

/// Binary wavefunction snapshot, all fields little-endian:
///
///   char[8]   magic "TLAOSNAP"
///   uint32    format version (1)
///   uint32    number of dimensions d (1 or 2)
///   d times:  uint64 point count, float64 axis minimum, float64 axis maximum (exclusive)
///   float64   time
///   then prod(counts) complex samples as interleaved (real, imag) float64 pairs,
///   row-major with the last axis fastest.
struct Snapshot {
    std::vector<Grid1D> axes;
    double time = 0.0;
    std::vector<std::complex<double>> values;
};

void write_snapshot(const std::filesystem::path& path, std::span<const Grid1D> axes, double time,
                    std::span<const std::complex<double>> values);
Snapshot read_snapshot(const std::filesystem::path& path);

}  // namespace tlao
