#ifndef SADDLE_MATRIX_MARKET_HPP
#define SADDLE_MATRIX_MARKET_HPP

#include <filesystem>

#include "saddle/csr.hpp"

namespace saddle {

/// Reads a real Matrix Market file (coordinate or array, general or
/// symmetric/skew-symmetric storage). Symmetric storage is expanded to the
/// full matrix, 1-based indices converted, duplicates summed. Throws
/// ParseError with a line number for malformed input and UsageError for
/// pattern/complex fields.
CsrMatrix read_matrix_market(const std::filesystem::path& path);

/// Writes coordinate-format Matrix Market with full precision so that a
/// read-back reproduces the values bitwise.
void write_matrix_market(const CsrMatrix& m, const std::filesystem::path& path);

} // namespace saddle

#endif
