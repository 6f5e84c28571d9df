#pragma once

#include "lowrank/types.hpp"

#include <string>

namespace lowrank {

/// Reads a PGM image (ASCII "P2" or binary 8-bit "P5") into a matrix of
/// gray levels in [0, maxval]. '#' comments in the header are allowed.
/// Malformed headers, P6 color files and binary maxval > 255 are rejected
/// with a message naming the offending field.
Matrix read_pgm(const std::string& path);

/// Writes a binary (P5) 8-bit PGM; values are rounded and clamped to
/// [0, 255].
void write_pgm(const std::string& path, const Matrix& image);

} // namespace lowrank
