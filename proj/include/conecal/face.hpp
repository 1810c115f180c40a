#pragma once

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "conecal/cone.hpp"
#include "conecal/grid.hpp"

namespace conecal {

enum class FaceKind { whole_cone, zero, orthant_coords, psd_block, lorentz_ray };

inline const char* face_kind_name(FaceKind k) {
  switch (k) {
    case FaceKind::whole_cone: return "whole_cone";
    case FaceKind::zero: return "zero";
    case FaceKind::orthant_coords: return "orthant_coords";
    case FaceKind::psd_block: return "psd_block";
    case FaceKind::lorentz_ray: return "lorentz_ray";
  }
  return "?";
}

// Gaussian matrix + modified Gram-Schmidt; plenty for n <= 8.
inline std::vector<double> random_orthonormal(int n, Rng& rng) {
  std::vector<double> q(static_cast<std::size_t>(n) * n);
  for (int j = 0; j < n; ++j) {
    std::vector<double> col(n);
    for (int attempt = 0;; ++attempt) {
      for (int i = 0; i < n; ++i) col[i] = rng.gauss();
      for (int k = 0; k < j; ++k) {
        double d = 0.0;
        for (int i = 0; i < n; ++i) d += col[i] * q[i * n + k];
        for (int i = 0; i < n; ++i) col[i] -= d * q[i * n + k];
      }
      double nn = 0.0;
      for (int i = 0; i < n; ++i) nn += col[i] * col[i];
      nn = std::sqrt(nn);
      if (nn > 1e-6 || attempt > 16) {
        for (int i = 0; i < n; ++i) q[i * n + j] = col[i] / nn;
        break;
      }
    }
  }
  return q;
}

// A face of one of the three cones, represented intensionally: the paper's
// classification makes every face finitely describable, so constructors
// stand in for existence arguments. Membership and the span basis follow
// from the kind.
//
// Faces in play:
//   whole_cone       C itself
//   zero             {0}
//   orthant_coords   {x in orthant : x_i = 0 for i outside S}
//   psd_block        matrices equal to Q diag(y, 0_{n-m}) Q^T with y in psd(m)
//   lorentz_ray      {lambda g : lambda >= 0} for a boundary generator g
struct Face {
  Cone parent;
  FaceKind kind = FaceKind::zero;
  std::vector<int> coord_set;      // orthant_coords: sorted member coordinates
  int block_m = 0;                 // psd_block
  std::vector<double> rotation;    // psd_block: row-major Q, block = first m columns
  Point ray_generator;             // lorentz_ray
  std::vector<Point> span_basis;   // orthonormal, ordered to match reduced coords

  std::size_t reduced_dim() const { return span_basis.size(); }

  // The face expressed in its own span is again one of the concrete cones.
  Cone reduced_cone() const {
    switch (kind) {
      case FaceKind::whole_cone: return parent;
      case FaceKind::orthant_coords: return Cone::orthant(static_cast<int>(coord_set.size()));
      case FaceKind::psd_block: return Cone::psd(block_m);
      case FaceKind::lorentz_ray: return Cone::orthant(1);
      case FaceKind::zero: break;
    }
    throw std::logic_error("reduced_cone: zero face has no reduced space");
  }

  Point reduce(const Point& x) const {
    Point r(span_basis.size());
    for (std::size_t i = 0; i < span_basis.size(); ++i) r[i] = inner(x, span_basis[i]);
    return r;
  }

  Point embed(const Point& r) const {
    if (r.dim() != span_basis.size())
      throw std::invalid_argument("embed: reduced dimension mismatch");
    Point x(parent.ambient_dim());
    for (std::size_t i = 0; i < span_basis.size(); ++i)
      for (std::size_t j = 0; j < x.dim(); ++j) x[j] += r[i] * span_basis[i][j];
    return x;
  }

  bool member(const Point& x, double tol = kDefaultTol) const {
    check_dim(parent, x);
    switch (kind) {
      case FaceKind::whole_cone:
        return contains(parent, x, tol);
      case FaceKind::zero:
        return norm(x) <= tol;
      case FaceKind::orthant_coords: {
        std::size_t s = 0;
        for (std::size_t i = 0; i < x.dim(); ++i) {
          const bool in_set = s < coord_set.size() &&
                              coord_set[s] == static_cast<int>(i);
          if (in_set) {
            if (x[i] < -tol) return false;
            ++s;
          } else if (std::abs(x[i]) > tol) {
            return false;
          }
        }
        return true;
      }
      case FaceKind::psd_block: {
        const int n = parent.param;
        const std::vector<double> xm = vec_to_sym(n, x);
        const std::vector<double> y =
            mat_mul(n, mat_transpose(n, rotation), mat_mul(n, xm, rotation));
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            if ((i >= block_m || j >= block_m) && std::abs(y[i * n + j]) > tol)
              return false;
        if (block_m == 0) return true;
        std::vector<double> blk(static_cast<std::size_t>(block_m) * block_m);
        for (int i = 0; i < block_m; ++i)
          for (int j = 0; j < block_m; ++j) blk[i * block_m + j] = y[i * n + j];
        return min_eigenvalue(block_m, blk) >= -tol;
      }
      case FaceKind::lorentz_ray: {
        const Point& g = ray_generator;
        const double gn = norm(g);
        double lambda = inner(x, g) / (gn * gn);
        if (lambda < -tol) return false;
        if (lambda < 0.0) lambda = 0.0;
        return norm(x - lambda * g) <= tol * (1.0 + norm(x));
      }
    }
    return false;
  }
};

inline Face whole_face(const Cone& c) {
  Face f;
  f.parent = c;
  f.kind = FaceKind::whole_cone;
  const std::size_t d = c.ambient_dim();
  f.span_basis.reserve(d);
  for (std::size_t i = 0; i < d; ++i) {
    Point e(d);
    e[i] = 1.0;
    f.span_basis.push_back(std::move(e));
  }
  return f;
}

inline Face zero_face(const Cone& c) {
  Face f;
  f.parent = c;
  f.kind = FaceKind::zero;
  return f;
}

inline Face orthant_coord_face(int d, std::vector<int> coords) {
  std::sort(coords.begin(), coords.end());
  coords.erase(std::unique(coords.begin(), coords.end()), coords.end());
  for (int i : coords)
    if (i < 0 || i >= d)
      throw std::invalid_argument("orthant_coord_face: coordinate out of range");
  if (coords.empty()) return zero_face(Cone::orthant(d));
  if (coords.size() == static_cast<std::size_t>(d))
    return whole_face(Cone::orthant(d));
  Face f;
  f.parent = Cone::orthant(d);
  f.kind = FaceKind::orthant_coords;
  f.coord_set = std::move(coords);
  for (int i : f.coord_set) {
    Point e(static_cast<std::size_t>(d));
    e[static_cast<std::size_t>(i)] = 1.0;
    f.span_basis.push_back(std::move(e));
  }
  return f;
}

// Face of psd(n): matrices that are diag(y, 0_{n-m}) in the rotated basis,
// with y in psd(m). The span basis is ordered diagonal-first to match the
// vectorization of psd(m), so reduce() of a member is exactly vec_m(y).
inline Face psd_block_face(int n, int m, const std::vector<double>& rotation) {
  if (m < 1 || m > n) throw std::invalid_argument("psd_block_face: need 1 <= m <= n");
  if (rotation.size() != static_cast<std::size_t>(n) * n)
    throw std::invalid_argument("psd_block_face: rotation size");
  const std::vector<double> qtq = mat_mul(n, mat_transpose(n, rotation), rotation);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (std::abs(qtq[i * n + j] - (i == j ? 1.0 : 0.0)) > 1e-9)
        throw std::invalid_argument("psd_block_face: rotation not orthonormal");

  Face f;
  f.parent = Cone::psd(n);
  f.kind = FaceKind::psd_block;
  f.block_m = m;
  f.rotation = rotation;

  auto rotated_basis_vec = [&](int a, int b) {
    // vec(Q B Q^T) for the unit-Frobenius symmetric basis element B_{ab}.
    std::vector<double> mat(static_cast<std::size_t>(n) * n, 0.0);
    if (a == b) {
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          mat[i * n + j] = rotation[i * n + a] * rotation[j * n + a];
    } else {
      const double s = 1.0 / kSqrt2;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          mat[i * n + j] = s * (rotation[i * n + a] * rotation[j * n + b] +
                                rotation[i * n + b] * rotation[j * n + a]);
    }
    return sym_to_vec(n, mat);
  };
  for (int a = 0; a < m; ++a) f.span_basis.push_back(rotated_basis_vec(a, a));
  for (int a = 0; a < m; ++a)
    for (int b = a + 1; b < m; ++b) f.span_basis.push_back(rotated_basis_vec(a, b));
  return f;
}

inline Face lorentz_ray_face(int d, const Point& generator) {
  const Cone c = Cone::lorentz(d);
  check_dim(c, generator);
  const double tail = lorentz_tail_norm(generator);
  if (!(generator[0] > 1e-9) || std::abs(tail - generator[0]) > 1e-9)
    throw std::invalid_argument(
        "lorentz_ray_face: generator must be a nonzero boundary point "
        "(|x_{>=1}| = x_0 > 0)");
  Face f;
  f.parent = c;
  f.kind = FaceKind::lorentz_ray;
  f.ray_generator = generator;
  f.span_basis.push_back((1.0 / norm(generator)) * generator);
  return f;
}

// Uniform-ish sample from the face: a reduced-cone member pushed through the
// span basis.
inline Point face_member_sample(const Face& f, Rng& rng) {
  switch (f.kind) {
    case FaceKind::zero:
      return Point(f.parent.ambient_dim());
    case FaceKind::whole_cone:
      return sample_member(f.parent, rng);
    default:
      return f.embed(sample_member(f.reduced_cone(), rng));
  }
}

struct AxiomReport {
  std::size_t attempted = 0;
  std::size_t accepted = 0;    // candidate pairs that passed 0 <= x <= y
  std::size_t violations = 0;  // accepted x outside the face
};

// Samples y in F, then candidates x built by ambient means (scalings,
// order-interval draws, projected perturbations), keeps those passing the
// order filter 0 <= x <= y, and counts how many land outside the face.
//
// The order filter runs at 1e-12; the membership check at 1e-5, which covers
// the slack a 1e-12 order margin allows off the face (square-root scale).
inline AxiomReport face_axiom_check(const Face& f, std::size_t n_samples,
                                    RngSeed seed) {
  if (n_samples < 1) throw std::invalid_argument("face_axiom_check: n_samples >= 1");
  Rng rng(seed);
  AxiomReport rep;
  const double tol_filter = 1e-12;
  const double tol_member = 1e-5;
  const Cone& c = f.parent;

  auto order_interval_draw = [&](const Point& y) -> Point {
    // Exact x with 0 <= x <= y, by cone-specific construction.
    switch (c.kind) {
      case ConeKind::orthant: {
        Point x(y.dim());
        for (std::size_t i = 0; i < y.dim(); ++i) x[i] = rng.uniform01() * y[i];
        return x;
      }
      case ConeKind::psd: {
        // y^{1/2} S y^{1/2} with 0 <= S <= I.
        const int n = c.param;
        SymEig ey = sym_eig(n, vec_to_sym(n, y));
        std::vector<double> sq(ey.values);
        for (double& v : sq) v = v > 0.0 ? std::sqrt(v) : 0.0;
        const std::vector<double> ysqrt = eig_recompose(ey, sq);
        const std::vector<double> v = random_orthonormal(n, rng);
        std::vector<double> s(static_cast<std::size_t>(n) * n, 0.0);
        for (int k = 0; k < n; ++k) {
          const double u = rng.uniform01();
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
              s[i * n + j] += u * v[i * n + k] * v[j * n + k];
        }
        return sym_to_vec(n, mat_mul(n, ysqrt, mat_mul(n, s, ysqrt)));
      }
      case ConeKind::lorentz:
      default:
        return rng.uniform01() * y;
    }
  };

  std::size_t produced = 0;
  const std::size_t max_attempts = 60 * n_samples;
  while (produced < n_samples && rep.attempted < max_attempts) {
    const Point y = face_member_sample(f, rng);
    ++rep.attempted;
    Point x;
    const double pick = rng.uniform01();
    if (pick < 0.34) {
      x = rng.uniform01() * y;
    } else if (pick < 0.67) {
      x = order_interval_draw(y);
    } else {
      const double eps = 0.25 * rng.uniform01() * (norm(y) + 1e-6);
      Point g = rng.gaussian_point(y.dim());
      const double gn = norm(g);
      if (gn > 0.0) g = (1.0 / gn) * g;
      x = project(c, rng.uniform01() * y + eps * g);
    }
    if (!contains(c, x, tol_filter)) continue;
    if (!contains(c, y - x, tol_filter)) continue;
    ++produced;
    ++rep.accepted;
    if (!f.member(x, tol_member)) ++rep.violations;
  }
  return rep;
}

// Lemma-4.3-style check: members of a proper face never sit in the parent's
// interior.
inline std::size_t face_boundary_violations(const Face& f, std::size_t n_samples,
                                            RngSeed seed) {
  Rng rng(seed);
  std::size_t bad = 0;
  for (std::size_t k = 0; k < n_samples; ++k) {
    const Point x = face_member_sample(f, rng);
    if (interior_contains(f.parent, x, kDefaultTol)) ++bad;
  }
  return bad;
}

// Smallest face containing all the samples.
//   orthant: the coordinate-subset face of the union of supports
//   psd:     block face of the span of sample ranges
//   lorentz: whole cone / single boundary ray / zero
inline Face generated_face(const Cone& c, const std::vector<Point>& samples) {
  if (samples.empty())
    throw std::invalid_argument("generated_face: empty sample sequence");
  for (const Point& s : samples)
    if (!contains(c, s, kDefaultTol))
      throw std::invalid_argument("generated_face: sample not in cone");

  switch (c.kind) {
    case ConeKind::orthant: {
      std::set<int> support;
      for (const Point& s : samples)
        for (std::size_t i = 0; i < s.dim(); ++i)
          if (s[i] > kDefaultTol) support.insert(static_cast<int>(i));
      return orthant_coord_face(c.param,
                                std::vector<int>(support.begin(), support.end()));
    }
    case ConeKind::psd: {
      const int n = c.param;
      std::vector<double> sum(static_cast<std::size_t>(n) * n, 0.0);
      for (const Point& s : samples) {
        const std::vector<double> m = vec_to_sym(n, s);
        for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += m[i];
      }
      SymEig e = sym_eig(n, sum);
      // Rank decision: relative eigenvalue threshold with floor 1.
      const double lmax = e.values.back();
      const double thr = 1e-7 * std::max(lmax, 1.0);
      int m = 0;
      for (double v : e.values)
        if (v > thr) ++m;
      if (m == 0) return zero_face(c);
      if (m == n) return whole_face(c);
      // Range eigenvectors first (descending eigenvalues).
      std::vector<double> q(static_cast<std::size_t>(n) * n);
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
          q[i * n + j] = e.vectors[i * n + (n - 1 - j)];
      return psd_block_face(n, m, q);
    }
    case ConeKind::lorentz: {
      const Point* generator = nullptr;
      for (const Point& s : samples) {
        if (norm(s) <= kDefaultTol) continue;
        if (interior_contains(c, s, kDefaultTol)) return whole_face(c);
        if (generator == nullptr) {
          generator = &s;
          continue;
        }
        // Two distinct boundary rays average to an interior point.
        const Point u = (1.0 / (*generator)[0]) * (*generator);
        const Point v = (1.0 / s[0]) * s;
        if (norm(u - v) > 1e-7) return whole_face(c);
      }
      if (generator == nullptr) return zero_face(c);
      return lorentz_ray_face(c.param, *generator);
    }
  }
  throw std::logic_error("unreachable");
}

// Constructive replacement for the Hahn-Banach separation step: v in C with
// <v, y> = 0 on the face and <v, x> > 0.
inline Point separating_vector(const Face& f, const Point& x) {
  const Cone& c = f.parent;
  check_dim(c, x);
  if (!contains(c, x, kDefaultTol))
    throw std::invalid_argument("separating_vector: x not in the parent cone");
  if (f.member(x, kDefaultTol))
    throw std::domain_error("separating_vector: x lies in the face");

  switch (f.kind) {
    case FaceKind::whole_cone:
      throw std::domain_error("separating_vector: whole cone has no exterior");
    case FaceKind::zero:
      return x;
    case FaceKind::orthant_coords: {
      Point v(x.dim());
      std::size_t s = 0;
      for (std::size_t i = 0; i < x.dim(); ++i) {
        const bool in_set =
            s < f.coord_set.size() && f.coord_set[s] == static_cast<int>(i);
        if (in_set) {
          ++s;
          continue;
        }
        if (x[i] > kDefaultTol) v[i] = 1.0;
      }
      return v;
    }
    case FaceKind::psd_block: {
      const int n = c.param;
      std::vector<double> m(static_cast<std::size_t>(n) * n, 0.0);
      for (int k = f.block_m; k < n; ++k)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            m[i * n + j] += f.rotation[i * n + k] * f.rotation[j * n + k];
      return sym_to_vec(n, m);
    }
    case FaceKind::lorentz_ray: {
      const Point& g = f.ray_generator;
      Point v(g.dim());
      v[0] = g[0];
      for (std::size_t i = 1; i < g.dim(); ++i) v[i] = -g[i];
      return (1.0 / norm(v)) * v;
    }
  }
  throw std::logic_error("unreachable");
}

struct FaceAudit {
  std::string label;
  std::size_t axiom_accepted = 0;
  std::size_t axiom_violations = 0;
  std::size_t boundary_violations = 0;   // proper faces only
  bool reduced_checked = false;
  double reduced_min_inner = 0.0;
  std::size_t reduced_violations = 0;
  std::size_t reduced_converse_failures = 0;
  std::size_t embedding_mismatches = 0;  // reduce/embed membership agreement
  bool interior_ok = false;
  bool pass = false;
};

struct PerfectnessReport {
  std::string cone;
  std::vector<FaceAudit> faces;
  bool all_pass = false;
};

inline Point canonical_interior_point(const Cone& c) {
  switch (c.kind) {
    case ConeKind::orthant: {
      Point p(c.ambient_dim());
      for (double& v : p.c) v = 1.0;
      return p;
    }
    case ConeKind::psd:
      return sym_to_vec(c.param, identity_matrix(c.param));
    case ConeKind::lorentz: {
      Point p(c.ambient_dim());
      p[0] = 1.0;
      return p;
    }
  }
  throw std::logic_error("unreachable");
}

namespace detail {

inline FaceAudit audit_one_face(const Face& f, const std::string& label,
                                std::size_t axiom_samples,
                                std::size_t duality_samples, Rng& master) {
  FaceAudit a;
  a.label = label;

  const AxiomReport ax = face_axiom_check(f, axiom_samples, master.next_u64());
  a.axiom_accepted = ax.accepted;
  a.axiom_violations = ax.violations;

  if (f.kind != FaceKind::whole_cone)
    a.boundary_violations = face_boundary_violations(f, axiom_samples, master.next_u64());

  if (f.kind == FaceKind::zero) {
    // {0} is self-dual in its zero-dimensional span; nothing to sample.
    a.interior_ok = true;
    a.pass = a.axiom_violations == 0 && a.boundary_violations == 0;
    return a;
  }

  const Cone red = f.reduced_cone();
  const DualityReport d = self_duality_audit(red, duality_samples, master.next_u64());
  a.reduced_checked = true;
  a.reduced_min_inner = d.min_inner;
  a.reduced_violations = d.violations + d.converse_failures;
  a.reduced_converse_failures = d.converse_failures;

  // Agreement of the two membership views across the span isometry.
  Rng rng(master.next_u64());
  for (int k = 0; k < 200; ++k) {
    const Point r = sample_member(red, rng);
    if (!f.member(f.embed(r), 1e-6)) ++a.embedding_mismatches;
    const Point y = face_member_sample(f, rng);
    if (!contains(red, f.reduce(y), 1e-6)) ++a.embedding_mismatches;
  }

  // Relative interior witness, exhibited in reduced coordinates.
  const Point ri = canonical_interior_point(red);
  a.interior_ok = interior_contains(red, ri, kDefaultTol) &&
                  f.member(f.embed(ri), 1e-6);

  a.pass = a.axiom_violations == 0 && a.boundary_violations == 0 &&
           a.reduced_violations == 0 && a.embedding_mismatches == 0 &&
           a.interior_ok;
  return a;
}

}  // namespace detail

// Def-2.1 audit over a representative family of faces: the face axiom,
// self-duality inside each face's span, and a relative-interior witness.
// The psd face family is a continuum, so rotations are sampled.
inline PerfectnessReport perfectness_audit(const Cone& c,
                                           std::size_t n_face_samples,
                                           RngSeed seed,
                                           std::size_t axiom_samples = 1000,
                                           std::size_t duality_samples = 2000) {
  Rng master(seed);
  PerfectnessReport rep;
  rep.cone = c.spec();

  auto audit = [&](const Face& f, const std::string& label) {
    rep.faces.push_back(detail::audit_one_face(f, label, axiom_samples,
                                               duality_samples, master));
  };

  switch (c.kind) {
    case ConeKind::orthant: {
      const int d = c.param;
      if (d <= 6) {
        for (unsigned mask = 0; mask < (1u << d); ++mask) {
          std::vector<int> coords;
          for (int i = 0; i < d; ++i)
            if (mask & (1u << i)) coords.push_back(i);
          std::string label = "orthant-face{";
          for (std::size_t i = 0; i < coords.size(); ++i)
            label += (i ? "," : "") + std::to_string(coords[i]);
          label += "}";
          audit(orthant_coord_face(d, coords), label);
        }
      } else {
        audit(zero_face(c), "zero");
        audit(whole_face(c), "whole");
        for (std::size_t s = 0; s < n_face_samples; ++s) {
          std::vector<int> coords;
          for (int i = 0; i < d; ++i)
            if (master.uniform01() < 0.5) coords.push_back(i);
          audit(orthant_coord_face(d, coords), "orthant-face#" + std::to_string(s));
        }
      }
      break;
    }
    case ConeKind::psd: {
      const int n = c.param;
      audit(zero_face(c), "zero");
      audit(whole_face(c), "whole");
      for (int m = 1; m < n; ++m) {
        audit(psd_block_face(n, m, identity_matrix(n)),
              "psd-block m=" + std::to_string(m) + " id");
        for (std::size_t s = 0; s < n_face_samples; ++s)
          audit(psd_block_face(n, m, random_orthonormal(n, master)),
                "psd-block m=" + std::to_string(m) + " #" + std::to_string(s));
      }
      break;
    }
    case ConeKind::lorentz: {
      audit(zero_face(c), "zero");
      audit(whole_face(c), "whole");
      std::size_t produced = 0;
      for (int attempt = 0; produced < n_face_samples && attempt < 1000; ++attempt) {
        Point g = sample_boundary(c, master);
        if (norm(g) <= 1e-9 || g[0] <= 1e-9) continue;  // degenerate draw
        audit(lorentz_ray_face(c.param, g),
              "lorentz-ray#" + std::to_string(produced));
        ++produced;
      }
      break;
    }
  }

  rep.all_pass = true;
  for (const FaceAudit& a : rep.faces)
    if (!a.pass) rep.all_pass = false;
  return rep;
}

}  // namespace conecal
