#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace rom {

// Minimal row-major dense matrix. Only used for small reference
// matrices, Gram matrices, and sampled Gaussian-orthogonal blocks.
struct DenseMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> a;

  DenseMatrix() = default;
  DenseMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0.0) {}

  double& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

  const double* row(std::size_t i) const { return a.data() + i * cols; }

  static DenseMatrix identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }
};

inline std::vector<double> matvec(const DenseMatrix& m, const std::vector<double>& v) {
  if (v.size() != m.cols) throw std::invalid_argument("matvec: dimension mismatch");
  std::vector<double> out(m.rows, 0.0);
  for (std::size_t i = 0; i < m.rows; ++i) {
    double acc = 0.0;
    const double* r = m.row(i);
    for (std::size_t j = 0; j < m.cols; ++j) acc += r[j] * v[j];
    out[i] = acc;
  }
  return out;
}

}  // namespace rom
