#pragma once

#include "lowrank/types.hpp"

#include <iosfwd>
#include <string>

namespace lowrank {

// Matrices travel as plain CSV: one row per line, comma-separated decimal
// numbers ('.' separator, scientific notation allowed), no header. Written
// numbers are shortest round-trip representations, so write/read is exact.

Matrix read_matrix_csv(std::istream& in, const std::string& name = "<stream>");
Matrix read_matrix_csv(const std::string& path);

void write_matrix_csv(std::ostream& out, const Matrix& a);
void write_matrix_csv(const std::string& path, const Matrix& a);

} // namespace lowrank
