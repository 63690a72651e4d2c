#pragma once

#include <cstdio>
#include <ostream>
#include <span>
#include <string>

#include <Eigen/Dense>

namespace primecoh::csv {

/// Shortest round-trippable form is not needed; artifacts use a fixed
/// 17-significant-digit rendering so reruns diff cleanly.
inline std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// Headerless, row-major, full matrix.
inline void write_matrix(std::ostream& os, const Eigen::MatrixXd& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) os << ',';
      os << format_double(m(i, j));
    }
    os << '\n';
  }
}

inline void write_column(std::ostream& os, std::span<const double> values) {
  for (double v : values) os << format_double(v) << '\n';
}

}  // namespace primecoh::csv
