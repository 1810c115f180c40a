#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "conecal/point.hpp"

namespace conecal {

struct SymEig {
  int n = 0;
  std::vector<double> values;   // ascending
  std::vector<double> vectors;  // row-major; column j is the eigenvector of values[j]
};

// Cyclic Jacobi rotations for a symmetric matrix, iterated until the
// off-diagonal Frobenius norm drops below off_tol (default 1e-12) or
// max_sweeps is hit. Matrices in this codebase are small (n <= 8), where
// Jacobi is accurate and has no dependency cost.
inline SymEig sym_eig(int n, std::vector<double> a, double off_tol = 1e-12,
                      int max_sweeps = 50) {
  if (a.size() != static_cast<std::size_t>(n) * n)
    throw std::invalid_argument("sym_eig: bad matrix size");

  std::vector<double> v = identity_matrix(n);

  auto off_norm_sq = [&]() {
    double s = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) s += 2.0 * a[p * n + q] * a[p * n + q];
    return s;
  };

  const double tol_sq = off_tol * off_tol;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    if (off_norm_sq() <= tol_sq) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a[p * n + q];
        if (std::abs(apq) <= 1e-300) continue;
        const double theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
        const double sign = theta >= 0.0 ? 1.0 : -1.0;
        const double t = sign / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const double tau = s / (1.0 + c);

        const double app = a[p * n + p];
        const double aqq = a[q * n + q];
        a[p * n + p] = app - t * apq;
        a[q * n + q] = aqq + t * apq;
        a[p * n + q] = 0.0;
        a[q * n + p] = 0.0;
        for (int r = 0; r < n; ++r) {
          if (r != p && r != q) {
            const double arp = a[r * n + p];
            const double arq = a[r * n + q];
            a[r * n + p] = arp - s * (arq + tau * arp);
            a[p * n + r] = a[r * n + p];
            a[r * n + q] = arq + s * (arp - tau * arq);
            a[q * n + r] = a[r * n + q];
          }
          const double vrp = v[r * n + p];
          const double vrq = v[r * n + q];
          v[r * n + p] = vrp - s * (vrq + tau * vrp);
          v[r * n + q] = vrq + s * (vrp - tau * vrq);
        }
      }
    }
  }

  SymEig e;
  e.n = n;
  e.values.resize(n);
  for (int i = 0; i < n; ++i) e.values[i] = a[i * n + i];

  // Sort ascending, permuting eigenvector columns along.
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::stable_sort(perm.begin(), perm.end(),
                   [&](int i, int j) { return e.values[i] < e.values[j]; });
  std::vector<double> sorted_vals(n);
  std::vector<double> sorted_vecs(static_cast<std::size_t>(n) * n);
  for (int j = 0; j < n; ++j) {
    sorted_vals[j] = e.values[perm[j]];
    for (int i = 0; i < n; ++i) sorted_vecs[i * n + j] = v[i * n + perm[j]];
  }
  e.values = std::move(sorted_vals);
  e.vectors = std::move(sorted_vecs);
  return e;
}

inline double min_eigenvalue(int n, const std::vector<double>& m) {
  return sym_eig(n, m).values.front();
}

// V * diag(vals) * V^T for row-major V whose columns are eigenvectors.
inline std::vector<double> eig_recompose(const SymEig& e,
                                         const std::vector<double>& vals) {
  const int n = e.n;
  std::vector<double> m(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k)
        s += e.vectors[i * n + k] * vals[k] * e.vectors[j * n + k];
      m[i * n + j] = s;
      m[j * n + i] = s;
    }
  return m;
}

}  // namespace conecal
