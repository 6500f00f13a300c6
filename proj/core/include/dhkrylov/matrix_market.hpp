#pragma once

#include <filesystem>
#include <iosfwd>

#include "dhkrylov/config.hpp"

namespace dhk {

enum class MatrixMarketFormat { Coordinate, Array };

/// Reads a Matrix Market file (coordinate or array; real, integer, pattern
/// or complex fields; general, symmetric, skew-symmetric or hermitian).
/// Complex data is rejected in real builds unless every imaginary part is
/// zero. Throws IoError on malformed input.
Matrix read_matrix_market(std::istream& in);
Matrix read_matrix_market(const std::filesystem::path& path);

/// Writes a general matrix. Values are printed in shortest round-trip form,
/// so reading an array-format file back reproduces every bit.
void write_matrix_market(std::ostream& out, const Matrix& m,
                         MatrixMarketFormat format = MatrixMarketFormat::Array);
void write_matrix_market(const std::filesystem::path& path, const Matrix& m,
                         MatrixMarketFormat format = MatrixMarketFormat::Array);

}  // namespace dhk
