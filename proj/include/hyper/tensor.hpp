#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hyper {

using Vector = std::vector<double>;

// Row-major dense matrix of doubles.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> v;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), v(r * c, fill) {}

  double& operator()(std::size_t i, std::size_t j) { return v[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return v[i * cols + j]; }

  std::span<double> row(std::size_t i) { return {v.data() + i * cols, cols}; }
  std::span<const double> row(std::size_t i) const { return {v.data() + i * cols, cols}; }

  std::size_t size() const { return v.size(); }

  bool operator==(const Matrix& o) const = default;
};

inline bool all_finite(std::span<const double> x) {
  for (double e : x)
    if (!std::isfinite(e)) return false;
  return true;
}

inline bool all_finite(const Matrix& m) { return all_finite(std::span<const double>(m.v)); }

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline void check_shape(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument("shape error: " + what);
}

}  // namespace hyper
