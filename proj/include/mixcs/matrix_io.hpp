#pragma once

#include <iosfwd>
#include <string>

#include "mixcs/matrix.hpp"

namespace mixcs {

// CSMAT1 layout, all little-endian:
//   "CSMAT1"            6 bytes
//   n, N                uint32 each
//   scaling             float64
//   entries             n*N float64, row-major
void write_csmat(std::ostream& out, const MeasurementMatrix& matrix);
MeasurementMatrix read_csmat(std::istream& in);

void save_csmat(const std::string& path, const MeasurementMatrix& matrix);
MeasurementMatrix load_csmat(const std::string& path);

// One matrix row per line, shortest round-trip decimals.
void write_matrix_csv(std::ostream& out, const RowMatrix& entries);

}  // namespace mixcs
