#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "optomech/constants.hpp"
#include "optomech/errors.hpp"

namespace optomech {

// Scientific notation with 17 significant digits: lossless double
// round-trip, '.' decimal separator, diff-stable.
inline std::string format_sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.16e", v);
  return buf;
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

// Writes the table with leading metadata comment lines and '\n' endings.
inline void write_csv(const std::string& path, const CsvTable& table,
                      const std::string& config_hash) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open output file: " + path);
  out << "# optomech_version=" << kVersion << "\n";
  out << "# config_hash=" << config_hash << "\n";
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    out << (i ? "," : "") << table.header[i];
  }
  out << "\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      out << (i ? "," : "") << format_sci(row[i]);
    }
    out << "\n";
  }
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace optomech
