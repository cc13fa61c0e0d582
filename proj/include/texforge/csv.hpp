#pragma once

#include <cstdint>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "texforge/glcm.hpp"

namespace texforge {

/// L lines of L comma-separated counts; row = reference gray, column = associate gray.
inline void write_glcm_csv(const Glcm& g, std::ostream& out) {
  for (int i = 0; i < g.levels; ++i) {
    for (int j = 0; j < g.levels; ++j) {
      if (j) out << ',';
      out << g.at(i, j);
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("glcm csv: write failure");
}

inline void write_probabilities_csv(const GlcmProbabilities& p, std::ostream& out) {
  char buf[40];
  for (int i = 0; i < p.levels; ++i) {
    for (int j = 0; j < p.levels; ++j) {
      if (j) out << ',';
      std::snprintf(buf, sizeof buf, "%.17g", p.at(i, j));
      out << buf;
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("glcm csv: write failure");
}

/// Inverse of write_glcm_csv; the matrix must be square.
inline Glcm parse_glcm_csv(std::istream& in) {
  std::vector<std::vector<std::uint64_t>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::uint64_t> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stoull(cell));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::invalid_argument("glcm csv: empty input");
  const std::size_t n = rows.size();
  std::vector<std::uint64_t> counts;
  counts.reserve(n * n);
  for (const auto& row : rows) {
    if (row.size() != n) throw std::invalid_argument("glcm csv: matrix is not square");
    counts.insert(counts.end(), row.begin(), row.end());
  }
  return Glcm(static_cast<int>(n), std::move(counts));
}

}  // namespace texforge
