#pragma once

// Numeric CSV tables: a header row, then comma-separated %.17g cells.
// A cell is a real number or a complex literal in a+bi form.

#include <cmath>
#include <cstdlib>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "nufn/format.hpp"

namespace nufn::cli {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<complex>> rows;
};

inline std::string format_cell(complex v) { return format_complex(v); }

/// Reads back a cell written by format_cell.
inline complex parse_cell(const std::string& text) {
  const char* begin = text.c_str();
  char* end = nullptr;
  double re = std::strtod(begin, &end);
  if (end == begin) throw std::invalid_argument("csv: bad number '" + text + "'");
  if (*end == '\0') return {re, 0.0};
  const char* im_begin = end;
  double im = std::strtod(im_begin, &end);
  if (end == im_begin || *end != 'i' || end[1] != '\0') throw std::invalid_argument("csv: bad number '" + text + "'");
  return {re, im};
}

inline std::string write_csv(const Table& t) {
  std::string out;
  for (std::size_t i = 0; i < t.header.size(); ++i) out += (i ? "," : "") + t.header[i];
  out += "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + format_cell(row[i]);
    out += "\n";
  }
  return out;
}

inline std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, sep)) out.push_back(cell);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

inline Table read_csv(const std::string& text) {
  Table t;
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("csv: empty input");
  t.header = split(line, ',');
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto cells = split(line, ',');
    if (cells.size() != t.header.size()) throw std::invalid_argument("csv: row width differs from header");
    std::vector<complex> row;
    for (const auto& c : cells) row.push_back(parse_cell(c));
    t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace nufn::cli
