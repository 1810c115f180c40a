#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace conecal {

// Element of the ambient inner-product space, stored as a finite coordinate
// vector. Symmetric matrices enter through the isometric vectorization below,
// so the Euclidean dot product of coordinates is always the ambient inner
// product (Frobenius for matrices).
struct Point {
  std::vector<double> c;

  Point() = default;
  explicit Point(std::size_t dim) : c(dim, 0.0) {}
  Point(std::initializer_list<double> init) : c(init) {}
  explicit Point(std::vector<double> coords) : c(std::move(coords)) {}

  std::size_t dim() const { return c.size(); }
  double& operator[](std::size_t i) { return c[i]; }
  double operator[](std::size_t i) const { return c[i]; }

  friend bool operator==(const Point& a, const Point& b) { return a.c == b.c; }
};

inline void check_same_dim(const Point& a, const Point& b) {
  if (a.dim() != b.dim())
    throw std::invalid_argument("point dimension mismatch");
}

// Plain dot product, summed in coordinate order. Symmetry is exact because
// IEEE multiplication commutes bitwise.
inline double inner(const Point& a, const Point& b) {
  check_same_dim(a, b);
  double s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm(const Point& a) { return std::sqrt(inner(a, a)); }

inline Point operator+(const Point& a, const Point& b) {
  check_same_dim(a, b);
  Point r(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline Point operator-(const Point& a, const Point& b) {
  check_same_dim(a, b);
  Point r(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline Point operator*(double s, const Point& a) {
  Point r(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) r[i] = s * a[i];
  return r;
}

// --- symmetric-matrix vectorization -----------------------------------------
//
// An n x n symmetric matrix maps to n(n+1)/2 coordinates: the n diagonal
// entries first, then the strictly-upper entries in row-major order, each
// scaled by sqrt(2). With that scaling the coordinate dot product equals
// tr(x^T y), so the PSD cone machinery can stay entirely in coordinates.

inline std::size_t sym_vec_dim(int n) {
  return static_cast<std::size_t>(n) * (n + 1) / 2;
}

inline constexpr double kSqrt2 = 1.4142135623730950488;

// Matrices are row-major n*n vectors throughout.
inline Point sym_to_vec(int n, const std::vector<double>& m) {
  if (m.size() != static_cast<std::size_t>(n) * n)
    throw std::invalid_argument("sym_to_vec: bad matrix size");
  Point p(sym_vec_dim(n));
  std::size_t k = 0;
  for (int i = 0; i < n; ++i) p[k++] = m[i * n + i];
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) p[k++] = m[i * n + j] * kSqrt2;
  return p;
}

inline std::vector<double> vec_to_sym(int n, const Point& p) {
  if (p.dim() != sym_vec_dim(n))
    throw std::invalid_argument("vec_to_sym: bad vector size");
  std::vector<double> m(static_cast<std::size_t>(n) * n, 0.0);
  std::size_t k = 0;
  for (int i = 0; i < n; ++i) m[i * n + i] = p[k++];
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double v = p[k++] / kSqrt2;
      m[i * n + j] = v;
      m[j * n + i] = v;
    }
  return m;
}

inline double mat_trace(int n, const std::vector<double>& m) {
  double t = 0.0;
  for (int i = 0; i < n; ++i) t += m[i * n + i];
  return t;
}

inline std::vector<double> identity_matrix(int n) {
  std::vector<double> m(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) m[i * n + i] = 1.0;
  return m;
}

// C = A * B for row-major n x n matrices.
inline std::vector<double> mat_mul(int n, const std::vector<double>& a,
                                   const std::vector<double>& b) {
  std::vector<double> c(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      const double aik = a[i * n + k];
      if (aik == 0.0) continue;
      for (int j = 0; j < n; ++j) c[i * n + j] += aik * b[k * n + j];
    }
  return c;
}

inline std::vector<double> mat_transpose(int n, const std::vector<double>& a) {
  std::vector<double> t(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) t[j * n + i] = a[i * n + j];
  return t;
}

}  // namespace conecal
