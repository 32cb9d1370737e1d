#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace minimax {

using Vec = std::vector<double>;

inline double dot(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

inline Vec operator+(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("add: size mismatch");
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline Vec operator-(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("sub: size mismatch");
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline Vec operator*(double s, const Vec& a) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = s * a[i];
  return r;
}

// r += s * a
inline void axpy(double s, const Vec& a, Vec& r) {
  if (a.size() != r.size()) throw std::invalid_argument("axpy: size mismatch");
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += s * a[i];
}

inline Vec unit(const Vec& a) {
  double n = norm(a);
  if (n == 0.0) throw std::invalid_argument("unit: zero vector");
  return (1.0 / n) * a;
}

inline bool all_finite(const Vec& a) {
  for (double v : a)
    if (!std::isfinite(v)) return false;
  return true;
}

// Dense row-major matrix, small sizes only.
struct Mat {
  std::size_t rows = 0, cols = 0;
  std::vector<double> data;

  Mat() = default;
  Mat(std::size_t r, std::size_t c, double fill = 0.0)
      : rows(r), cols(c), data(r * c, fill) {}

  double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

  Vec row(std::size_t i) const {
    return Vec(data.begin() + static_cast<std::ptrdiff_t>(i * cols),
               data.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols));
  }

  Vec mul(const Vec& x) const {
    if (x.size() != cols) throw std::invalid_argument("mul: size mismatch");
    Vec r(rows, 0.0);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) r[i] += (*this)(i, j) * x[j];
    return r;
  }

  Vec mul_transpose(const Vec& x) const {
    if (x.size() != rows) throw std::invalid_argument("mul_transpose: size mismatch");
    Vec r(cols, 0.0);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) r[j] += (*this)(i, j) * x[i];
    return r;
  }
};

inline double quad_form(const Mat& h, const Vec& v) {
  return dot(v, h.mul(v));
}

}  // namespace minimax
