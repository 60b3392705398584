#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "recache/errors.hpp"
#include "recache/types.hpp"

namespace recache {

// PTM file format: CSV with F rows and F columns, row i / column j = p(i|j).
// Column sums are validated by the Ptm constructor.
inline Ptm load_ptm_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open PTM file: " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t pos = 0;
        row.push_back(std::stod(cell, &pos));
      } catch (const std::exception&) {
        throw ParseError(path + ":" + std::to_string(lineno) +
                         ": not a number: '" + cell + "'");
      }
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw ParseError(path + ":" + std::to_string(lineno) +
                       ": ragged row (expected " +
                       std::to_string(rows.front().size()) + " cells)");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError(path + ": empty PTM file");
  const int files = static_cast<int>(rows.size());
  if (rows.front().size() != static_cast<std::size_t>(files))
    throw ParseError(path + ": PTM must be square, got " +
                     std::to_string(files) + " rows x " +
                     std::to_string(rows.front().size()) + " columns");
  std::vector<double> col(static_cast<std::size_t>(files) * files);
  for (int i = 0; i < files; ++i)
    for (int j = 0; j < files; ++j)
      col[static_cast<std::size_t>(j) * files + i] = rows[i][j];
  return Ptm(files, std::move(col));
}

inline void save_ptm_csv(const Ptm& ptm, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write PTM file: " + path);
  const int files = ptm.files();
  char buf[64];
  for (int i = 0; i < files; ++i) {
    for (int j = 0; j < files; ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", ptm.at(i, j));
      out << buf << (j + 1 == files ? "" : ",");
    }
    out << "\n";
  }
}

}  // namespace recache
