#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "assd/types.hpp"

namespace assd::csv {

// Numeric matrices: one row per line, comma-separated, no header. A single
// leading line starting with '#' is skipped. Vectors: one value per line.

DenseMatrix parse_matrix(std::istream& in, const std::string& source = "<stream>");
DenseMatrix read_matrix(const std::string& path);
Vector read_vector(const std::string& path);

void write_matrix(const std::string& path, const DenseMatrix& m);
void write_vector(const std::string& path, const Vector& v);

/// Shortest decimal text that reads back to the same double.
std::string format_double(double v);

/// Header plus string cells, for the CSV files the harness writes.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Column position by name; throws IoError when absent.
  std::size_t column(const std::string& name) const;
};

Table read_table(const std::string& path);
void write_table(const std::string& path, const Table& table);

}  // namespace assd::csv
