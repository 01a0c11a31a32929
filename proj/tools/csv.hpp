#pragma once

#include <Eigen/Dense>

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace lieco::cli {

inline std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Comma-separated values with a header row naming the columns and footer
/// comment lines recording the tolerances used. 17 significant digits.
inline void write_csv(const std::string& path, const std::vector<std::string>& columns,
                      const Eigen::MatrixXd& rows, const std::vector<std::string>& footer) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) out << ',';
    out << columns[i];
  }
  out << '\n';
  for (Eigen::Index r = 0; r < rows.rows(); ++r) {
    for (Eigen::Index c = 0; c < rows.cols(); ++c) {
      if (c) out << ',';
      out << format_real(rows(r, c));
    }
    out << '\n';
  }
  for (const auto& line : footer) out << "# " << line << '\n';
}

}  // namespace lieco::cli
