#pragma once

#include <cstddef>
#include <vector>

#include "pulearn/error.hpp"

namespace pulearn {

// Dense row-major matrix of doubles. Just enough linear-algebra surface
// for feature tables and the scorer; not a general-purpose library.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0)
      : rows(r), cols(c), data(r * c, fill) {}

  double& operator()(std::size_t r, std::size_t c) {
    return data[r * cols + c];
  }
  double operator()(std::size_t r, std::size_t c) const {
    return data[r * cols + c];
  }
  double* row(std::size_t r) { return data.data() + r * cols; }
  const double* row(std::size_t r) const { return data.data() + r * cols; }

  bool same_shape(const Matrix& o) const {
    return rows == o.rows && cols == o.cols;
  }

  // New matrix holding the given rows, in the given order.
  Matrix gather_rows(const std::vector<std::size_t>& idx) const {
    Matrix out(idx.size(), cols);
    for (std::size_t i = 0; i < idx.size(); ++i) {
      if (idx[i] >= rows) fail(Errc::invalid_argument, "row index out of range");
      const double* src = row(idx[i]);
      double* dst = out.row(i);
      for (std::size_t j = 0; j < cols; ++j) dst[j] = src[j];
    }
    return out;
  }
};

}  // namespace pulearn
