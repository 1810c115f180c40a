#pragma once

#include <cstdint>
#include <cstring>
#include <limits>
#include <memory>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "conecal/cone.hpp"

namespace conecal {

namespace detail {
struct IntVecHash {
  std::size_t operator()(const std::vector<int>& k) const {
    std::uint64_t h = 1469598103934665603ull;  // FNV-1a
    for (int v : k) {
      std::uint64_t u = static_cast<std::uint32_t>(v);
      for (int b = 0; b < 4; ++b) {
        h ^= (u >> (8 * b)) & 0xff;
        h *= 1099511628211ull;
      }
    }
    return static_cast<std::size_t>(h);
  }
};
}  // namespace detail

inline constexpr std::size_t kDefaultNodeBudget = 2'000'000;

// Lattice of pitch `spacing` over a truncated cone region:
//   orthant -> the box [0, radius]^d (always a full box lattice)
//   lorentz, psd -> the Euclidean ball of the given radius intersected with
//   the cone (membership at 1e-9 slack, so boundary lattice points stay in)
// Node order is lexicographic in the integer multi-index, hence deterministic
// for a given (cone, radius, spacing).
struct Grid {
  Cone cone;
  double radius = 0.0;
  double spacing = 0.0;
  std::vector<Point> nodes;
  std::vector<std::vector<int>> multi_index;
  bool box = false;                 // full box lattice (orthant grids)
  std::vector<int> box_sizes;       // per-axis node counts when box

  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

  std::size_t size() const { return nodes.size(); }

  std::size_t find_key(const std::vector<int>& key) const {
    auto it = map_.find(key);
    return it == map_.end() ? npos : it->second;
  }

  // Index of the node nearest to p, if p sits on the lattice (1e-6 relative
  // slack); npos otherwise.
  std::size_t find_point(const Point& p) const {
    std::vector<int> key(p.dim());
    for (std::size_t i = 0; i < p.dim(); ++i) {
      const double k = p[i] / spacing;
      const double r = std::nearbyint(k);
      if (std::abs(k - r) > 1e-6) return npos;
      key[i] = static_cast<int>(r);
    }
    return find_key(key);
  }

  std::size_t origin_index() const {
    return find_key(std::vector<int>(cone.ambient_dim(), 0));
  }

  // FNV-1a over the defining parameters and all node coordinates.
  std::uint64_t content_hash() const {
    std::uint64_t h = 1469598103934665603ull;
    auto eat = [&h](const void* data, std::size_t len) {
      const unsigned char* b = static_cast<const unsigned char*>(data);
      for (std::size_t i = 0; i < len; ++i) {
        h ^= b[i];
        h *= 1099511628211ull;
      }
    };
    const int kind = static_cast<int>(cone.kind);
    eat(&kind, sizeof kind);
    eat(&cone.param, sizeof cone.param);
    eat(&radius, sizeof radius);
    eat(&spacing, sizeof spacing);
    for (const Point& p : nodes)
      eat(p.c.data(), p.c.size() * sizeof(double));
    return h;
  }

  void finalize() {
    map_.clear();
    map_.reserve(nodes.size() * 2);
    for (std::size_t i = 0; i < nodes.size(); ++i) map_[multi_index[i]] = i;
  }

 private:
  std::unordered_map<std::vector<int>, std::size_t, detail::IntVecHash> map_;
};

using GridPtr = std::shared_ptr<const Grid>;

namespace detail {

inline void enumerate_lattice(const Cone& cone, double radius, double spacing,
                              std::size_t max_nodes, Grid& g) {
  const std::size_t dim = cone.ambient_dim();
  const double tol = 1e-9;
  const int kmax = static_cast<int>(std::floor((radius + tol) / spacing));

  // Per-axis integer ranges. Nonnegative where membership forces it:
  // everywhere for the orthant, the distinguished axis for lorentz, the
  // diagonal coordinates for psd.
  std::vector<int> lo(dim, -kmax);
  for (std::size_t a = 0; a < dim; ++a) {
    const bool nonneg =
        cone.kind == ConeKind::orthant ||
        (cone.kind == ConeKind::lorentz && a == 0) ||
        (cone.kind == ConeKind::psd && a < static_cast<std::size_t>(cone.param));
    if (nonneg) lo[a] = 0;
  }

  const bool ball = cone.kind != ConeKind::orthant;
  const double r2 = (radius + tol) * (radius + tol);

  std::vector<int> key(dim, 0);
  Point p(dim);

  // Depth-first over axes in order, so nodes come out lexicographically.
  auto rec = [&](auto&& self, std::size_t a, double sumsq) -> void {
    if (a == dim) {
      if (!contains(cone, p, tol)) return;
      if (g.nodes.size() >= max_nodes)
        throw std::runtime_error(
            "grid node budget (" + std::to_string(max_nodes) +
            ") exceeded; coarsen the spacing or shrink the radius");
      g.nodes.push_back(p);
      g.multi_index.push_back(key);
      return;
    }
    for (int k = lo[a]; k <= kmax; ++k) {
      const double x = k * spacing;
      const double ss = sumsq + x * x;
      if (ball && ss > r2) {
        if (k >= 0) break;  // symmetric range: once past the ball going up, done
        continue;
      }
      key[a] = k;
      p[a] = x;
      self(self, a + 1, ss);
    }
    key[a] = 0;
    p[a] = 0.0;
  };
  rec(rec, 0, 0.0);

  if (cone.kind == ConeKind::orthant) {
    g.box = true;
    g.box_sizes.assign(dim, kmax + 1);
  }
}

}  // namespace detail

inline GridPtr build_grid(const Cone& cone, double radius, double spacing,
                          std::size_t max_nodes = kDefaultNodeBudget) {
  if (!(radius > 0.0)) throw std::invalid_argument("build_grid: radius must be > 0");
  if (!(spacing > 0.0)) throw std::invalid_argument("build_grid: spacing must be > 0");
  if (spacing > radius)
    throw std::invalid_argument("build_grid: spacing must be <= radius");

  auto g = std::make_shared<Grid>();
  g->cone = cone;
  g->radius = radius;
  g->spacing = spacing;
  detail::enumerate_lattice(cone, radius, spacing, max_nodes, *g);
  g->finalize();
  return g;
}

// Grid from an explicit node list already on a lattice of the given pitch
// (used for reduced-space grids inside face spans).
inline GridPtr make_grid_from_nodes(const Cone& cone, double radius,
                                    double spacing, std::vector<Point> nodes) {
  auto g = std::make_shared<Grid>();
  g->cone = cone;
  g->radius = radius;
  g->spacing = spacing;
  g->nodes = std::move(nodes);
  g->multi_index.reserve(g->nodes.size());
  for (const Point& p : g->nodes) {
    std::vector<int> key(p.dim());
    for (std::size_t i = 0; i < p.dim(); ++i) {
      const double k = p[i] / spacing;
      const double r = std::nearbyint(k);
      if (std::abs(k - r) > 1e-6)
        throw std::invalid_argument("make_grid_from_nodes: node off lattice");
      key[i] = static_cast<int>(r);
    }
    g->multi_index.push_back(std::move(key));
  }
  g->finalize();
  return g;
}

}  // namespace conecal
