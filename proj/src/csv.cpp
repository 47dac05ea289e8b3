#include "jofc/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace jofc {

namespace {

struct ParsedCell {
  double value = 0.0;
  bool missing = false;
};

std::vector<std::vector<ParsedCell>> parse_rows(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::vector<std::vector<ParsedCell>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<ParsedCell> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      // trim surrounding spaces
      const auto first = cell.find_first_not_of(" \t");
      const auto last = cell.find_last_not_of(" \t");
      if (first == std::string::npos)
        throw ParseError(path + ":" + std::to_string(line_no) + ": empty cell");
      cell = cell.substr(first, last - first + 1);
      ParsedCell p;
      if (cell == "NA") {
        p.missing = true;
      } else {
        std::size_t used = 0;
        try {
          p.value = std::stod(cell, &used);
        } catch (const std::exception&) {
          throw ParseError(path + ":" + std::to_string(line_no) + ": bad number '" + cell + "'");
        }
        if (used != cell.size())
          throw ParseError(path + ":" + std::to_string(line_no) + ": bad number '" + cell + "'");
      }
      row.push_back(p);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError(path + ": empty file");
  return rows;
}

}  // namespace

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

DissimilarityMatrix read_matrix_csv(const std::string& path) {
  const auto rows = parse_rows(path);
  const std::size_t n = rows.size();
  for (const auto& row : rows)
    if (row.size() != n)
      throw RaggedRowsError(path + ": rows have inconsistent lengths or matrix is not square");
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  BoolMatrix mask = BoolMatrix::Constant(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n), false);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const auto& cell = rows[i][j];
      if (cell.missing)
        mask(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = true;
      else
        m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = cell.value;
    }
  }
  return validate_dissimilarity(m, mask);
}

void write_matrix_csv(const DissimilarityMatrix& d, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path);
  const Eigen::Index n = d.size();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j > 0) out << ',';
      if (d.missing(i, j))
        out << "NA";
      else
        out << format_number(d.entries(i, j));
    }
    out << '\n';
  }
}

Matrix read_table_csv(const std::string& path) {
  const auto rows = parse_rows(path);
  const std::size_t r = rows.size();
  const std::size_t c = rows[0].size();
  for (const auto& row : rows)
    if (row.size() != c) throw RaggedRowsError(path + ": ragged rows");
  Matrix m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) {
      if (rows[i][j].missing) throw ParseError(path + ": NA not allowed here");
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j].value;
    }
  return m;
}

void write_table_csv(const Matrix& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out << ',';
      out << format_number(m(i, j));
    }
    out << '\n';
  }
}

}  // namespace jofc
