#pragma once

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

#include "conecal/jacobi.hpp"
#include "conecal/point.hpp"
#include "conecal/rng.hpp"

namespace conecal {

inline constexpr double kDefaultTol = 1e-9;

enum class ConeKind { orthant, psd, lorentz };

// One of the three concrete self-dual cones:
//   orthant(d)  {x in R^d : x_i >= 0}
//   psd(n)      n x n positive semidefinite matrices, vectorized (dim n(n+1)/2)
//   lorentz(d)  {x in R^{d+1} : x_0 >= 0, |x_{>=1}| <= x_0}; coordinate 0 is
//               the distinguished axis
struct Cone {
  ConeKind kind = ConeKind::orthant;
  int param = 1;  // d for orthant/lorentz, n for psd

  static Cone orthant(int d) { return {ConeKind::orthant, d}; }
  static Cone psd(int n) { return {ConeKind::psd, n}; }
  static Cone lorentz(int d) { return {ConeKind::lorentz, d}; }

  std::size_t ambient_dim() const {
    switch (kind) {
      case ConeKind::orthant:
        return static_cast<std::size_t>(param);
      case ConeKind::psd:
        return sym_vec_dim(param);
      case ConeKind::lorentz:
        return static_cast<std::size_t>(param) + 1;
    }
    return 0;
  }

  std::string spec() const {
    const char* name = kind == ConeKind::orthant  ? "orthant"
                       : kind == ConeKind::psd    ? "psd"
                                                  : "lorentz";
    return std::string(name) + ":" + std::to_string(param);
  }

  friend bool operator==(const Cone& a, const Cone& b) {
    return a.kind == b.kind && a.param == b.param;
  }
  friend bool operator!=(const Cone& a, const Cone& b) { return !(a == b); }
};

// Parses "orthant:d" / "psd:n" / "lorentz:d".
inline Cone parse_cone_spec(const std::string& s) {
  const auto colon = s.find(':');
  if (colon == std::string::npos)
    throw std::invalid_argument("bad cone spec '" + s + "' (expected kind:dim)");
  const std::string name = s.substr(0, colon);
  int p = 0;
  try {
    std::size_t used = 0;
    p = std::stoi(s.substr(colon + 1), &used);
    if (used != s.size() - colon - 1) throw std::invalid_argument("");
  } catch (...) {
    throw std::invalid_argument("bad cone dimension in '" + s + "'");
  }
  if (p < 1) throw std::invalid_argument("cone dimension must be >= 1 in '" + s + "'");
  if (name == "orthant") return Cone::orthant(p);
  if (name == "psd") return Cone::psd(p);
  if (name == "lorentz") return Cone::lorentz(p);
  throw std::invalid_argument("unknown cone kind '" + name + "'");
}

inline void check_dim(const Cone& c, const Point& x) {
  if (x.dim() != c.ambient_dim())
    throw std::invalid_argument("point dimension does not match cone " + c.spec());
}

// Norm of the non-distinguished part of a Lorentz point.
inline double lorentz_tail_norm(const Point& x) {
  double s = 0.0;
  for (std::size_t i = 1; i < x.dim(); ++i) s += x[i] * x[i];
  return std::sqrt(s);
}

inline bool contains(const Cone& c, const Point& x, double tol = kDefaultTol) {
  check_dim(c, x);
  switch (c.kind) {
    case ConeKind::orthant:
      for (double v : x.c)
        if (v < -tol) return false;
      return true;
    case ConeKind::psd:
      return min_eigenvalue(c.param, vec_to_sym(c.param, x)) >= -tol;
    case ConeKind::lorentz:
      return x[0] >= -tol && lorentz_tail_norm(x) <= x[0] + tol;
  }
  return false;
}

inline bool interior_contains(const Cone& c, const Point& x,
                              double tol = kDefaultTol) {
  check_dim(c, x);
  switch (c.kind) {
    case ConeKind::orthant:
      for (double v : x.c)
        if (v <= tol) return false;
      return true;
    case ConeKind::psd:
      return min_eigenvalue(c.param, vec_to_sym(c.param, x)) > tol;
    case ConeKind::lorentz:
      return x[0] > tol && lorentz_tail_norm(x) < x[0] - tol;
  }
  return false;
}

// x <= y in the order induced by the cone: y - x in C.
inline bool order_leq(const Cone& c, const Point& x, const Point& y,
                      double tol = kDefaultTol) {
  return contains(c, y - x, tol);
}

// Euclidean projection onto the cone.
//  orthant: coordinatewise clamp at 0
//  psd:     eigendecompose, clamp eigenvalues at 0, recompose
//  lorentz: x inside -> x; x_0 <= -|tail| -> 0; else the standard
//           second-order-cone formula ((x_0+s)/2) * (1, tail/s), s = |tail|
inline Point project(const Cone& c, const Point& x) {
  check_dim(c, x);
  switch (c.kind) {
    case ConeKind::orthant: {
      Point r(x.dim());
      for (std::size_t i = 0; i < x.dim(); ++i) r[i] = x[i] > 0.0 ? x[i] : 0.0;
      return r;
    }
    case ConeKind::psd: {
      const int n = c.param;
      SymEig e = sym_eig(n, vec_to_sym(n, x));
      std::vector<double> clamped(e.values);
      for (double& v : clamped)
        if (v < 0.0) v = 0.0;
      return sym_to_vec(n, eig_recompose(e, clamped));
    }
    case ConeKind::lorentz: {
      const double s = lorentz_tail_norm(x);
      if (s <= x[0]) return x;  // inside (covers s = 0, x0 >= 0)
      if (x[0] <= -s) return Point(x.dim());
      const double a = (x[0] + s) / 2.0;
      Point r(x.dim());
      r[0] = a;
      for (std::size_t i = 1; i < x.dim(); ++i) r[i] = a * x[i] / s;
      return r;
    }
  }
  return x;
}

// Random cone member with norm <= 1: a Gaussian direction scaled into the
// unit ball, then projected. Projection cannot grow the norm (0 is in C).
inline Point sample_member(const Cone& c, Rng& rng) {
  const std::size_t d = c.ambient_dim();
  Point g = rng.gaussian_point(d);
  const double n = norm(g);
  if (n == 0.0) return Point(d);
  return project(c, (rng.uniform01() / n) * g);
}

// Member on the boundary (contains true, interior_contains false).
inline Point sample_boundary(const Cone& c, Rng& rng) {
  const std::size_t d = c.ambient_dim();
  switch (c.kind) {
    case ConeKind::orthant: {
      Point x = sample_member(c, rng);
      // Zero a random nonempty coordinate subset.
      const std::size_t fixed = rng.uniform_index(d);
      for (std::size_t i = 0; i < d; ++i)
        if (i == fixed || rng.uniform01() < 0.3) x[i] = 0.0;
      return x;
    }
    case ConeKind::psd: {
      const int n = c.param;
      Point x = sample_member(c, rng);
      SymEig e = sym_eig(n, vec_to_sym(n, x));
      std::vector<double> vals(e.values);
      const std::size_t fixed = rng.uniform_index(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i)
        if (static_cast<std::size_t>(i) == fixed || rng.uniform01() < 0.3)
          vals[i] = 0.0;
      return sym_to_vec(n, eig_recompose(e, vals));
    }
    case ConeKind::lorentz: {
      // (|g|, g) is exactly on the boundary.
      for (int attempt = 0; attempt < 64; ++attempt) {
        Point g = rng.gaussian_point(d - 1);
        const double n = norm(g);
        if (n == 0.0) continue;
        Point x(d);
        x[0] = n;
        for (std::size_t i = 1; i < d; ++i) x[i] = g[i - 1];
        return (1.0 / (2.0 * n)) * x;  // scale into the unit ball
      }
      return Point(d);
    }
  }
  return Point(d);
}

// Analytic witness y in C with inner(x, y) < 0 for a non-member x.
//  orthant: the coordinate axis of a negative coordinate
//  lorentz: (1, 0, ...) if x_0 < 0, else the reflected direction
//           (1, -tail/|tail|)
//  psd:     v v^T for an eigenvector v with negative eigenvalue
inline Point duality_witness(const Cone& c, const Point& x) {
  check_dim(c, x);
  switch (c.kind) {
    case ConeKind::orthant: {
      std::size_t worst = 0;
      double wv = 0.0;
      for (std::size_t i = 0; i < x.dim(); ++i)
        if (x[i] < wv) {
          wv = x[i];
          worst = i;
        }
      if (wv >= 0.0) throw std::domain_error("duality_witness: x is a member");
      Point y(x.dim());
      y[worst] = 1.0;
      return y;
    }
    case ConeKind::lorentz: {
      const double s = lorentz_tail_norm(x);
      if (x[0] < 0.0 && s <= -x[0]) {
        Point y(x.dim());
        y[0] = 1.0;
        return y;
      }
      if (s <= x[0]) throw std::domain_error("duality_witness: x is a member");
      Point y(x.dim());
      y[0] = 1.0;
      for (std::size_t i = 1; i < x.dim(); ++i) y[i] = -x[i] / s;
      return y;
    }
    case ConeKind::psd: {
      const int n = c.param;
      SymEig e = sym_eig(n, vec_to_sym(n, x));
      if (e.values.front() >= 0.0)
        throw std::domain_error("duality_witness: x is a member");
      std::vector<double> vv(static_cast<std::size_t>(n) * n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          vv[i * n + j] = e.vectors[i * n + 0] * e.vectors[j * n + 0];
      return sym_to_vec(n, vv);
    }
  }
  throw std::logic_error("unreachable");
}

struct DualityReport {
  std::size_t n_pairs = 0;
  double min_inner = 0.0;        // most negative pairing among member pairs
  std::size_t violations = 0;    // member pairs with inner < -1e-9
  std::size_t converse_checked = 0;
  std::size_t converse_failures = 0;  // non-members without a negative pairing
  double worst_converse_pairing = 0.0;  // largest (least negative) witness value
};

// Samples the two directions of self-duality: members pair nonnegatively,
// and every non-member is separated by some member. The converse direction
// uses the analytic witness plus a scan over sampled members, since sampling
// alone cannot certify a strict inequality.
inline DualityReport self_duality_audit(const Cone& c, std::size_t n_samples,
                                        RngSeed seed,
                                        std::size_t n_converse = 100) {
  if (n_samples < 1) throw std::invalid_argument("self_duality_audit: n_samples >= 1");
  Rng rng(seed);
  DualityReport rep;
  rep.n_pairs = n_samples;
  rep.min_inner = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n_samples; ++k) {
    const Point a = sample_member(c, rng);
    const Point b = sample_member(c, rng);
    const double ip = inner(a, b);
    rep.min_inner = std::min(rep.min_inner, ip);
    if (ip < -1e-9) ++rep.violations;
  }

  const std::size_t scan = 32;
  std::vector<Point> members;
  members.reserve(scan);
  for (std::size_t k = 0; k < scan; ++k) members.push_back(sample_member(c, rng));

  rep.worst_converse_pairing = -std::numeric_limits<double>::infinity();
  std::size_t found = 0;
  std::size_t attempts = 0;
  while (found < n_converse && attempts < 200 * n_converse) {
    ++attempts;
    Point x = rng.gaussian_point(c.ambient_dim());
    if (contains(c, x, 0.0)) continue;
    ++found;
    double best = inner(x, duality_witness(c, x));
    for (const Point& m : members) best = std::min(best, inner(x, m));
    rep.worst_converse_pairing = std::max(rep.worst_converse_pairing, best);
    if (!(best < 0.0)) ++rep.converse_failures;
  }
  rep.converse_checked = found;
  return rep;
}

}  // namespace conecal
