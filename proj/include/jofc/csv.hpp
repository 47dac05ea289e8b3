#pragma once

#include <string>

#include "jofc/core.hpp"

namespace jofc {

/// Reads a headerless square numeric CSV; the literal token NA marks missing
/// entries. Accepts LF or CRLF line endings. The result is validated.
DissimilarityMatrix read_matrix_csv(const std::string& path);

/// Writes a headerless CSV, 12 significant digits, NA for missing entries.
void write_matrix_csv(const DissimilarityMatrix& d, const std::string& path);

/// Reads any rectangular numeric CSV (no NA tokens, no header).
Matrix read_table_csv(const std::string& path);

void write_table_csv(const Matrix& m, const std::string& path);

/// Formats a double with 12 significant digits (the CSV number format).
std::string format_number(double v);

}  // namespace jofc
