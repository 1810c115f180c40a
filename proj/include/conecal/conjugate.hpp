#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "conecal/grid_fn.hpp"
#include "conecal/parallel.hpp"
#include "conecal/rng.hpp"

namespace conecal {

struct ConjugateValue {
  double value = 0.0;
  std::size_t argmax = 0;
};

// sup_{z in grid, f(z) finite} { <z, y> - f(z) } for an arbitrary dual point.
// Finite and attained because f is proper and the grid finite. Ties go to the
// smallest node index.
inline ConjugateValue conjugate_at(const GridFn& f, const Point& y) {
  f.require_proper();
  double best = -std::numeric_limits<double>::infinity();
  std::size_t arg = 0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f.values[i].is_inf()) continue;
    const double s = inner(f.grid->nodes[i], y) - f.values[i].value();
    if (s > best) {
      best = s;
      arg = i;
    }
  }
  return {best, arg};
}

// Discrete monotone conjugate: f* on the dual grid, the sup taken over the
// primal grid. Per-dual-node maxima are independent, so they fan out across
// workers into disjoint output slots.
inline GridFn monotone_conjugate(const GridFn& f, GridPtr dual_grid,
                                 std::vector<std::size_t>* argmax_out = nullptr) {
  f.require_proper();
  if (dual_grid->cone != f.grid->cone)
    throw std::invalid_argument("monotone_conjugate: cone mismatch");

  std::vector<ExtReal> vals(dual_grid->size());
  if (argmax_out != nullptr) argmax_out->assign(dual_grid->size(), 0);
  parallel_for(dual_grid->size(), [&](std::size_t j) {
    const ConjugateValue cv = conjugate_at(f, dual_grid->nodes[j]);
    vals[j] = ExtReal(cv.value);
    if (argmax_out != nullptr) (*argmax_out)[j] = cv.argmax;
  });
  return GridFn(std::move(dual_grid), std::move(vals));
}

// The affine minorants L_{y, -f*(y)} read off a computed conjugate.
inline std::vector<AffineMinorant> minorants_from_conjugate(const GridFn& fstar) {
  std::vector<AffineMinorant> ms;
  ms.reserve(fstar.size());
  for (std::size_t j = 0; j < fstar.size(); ++j)
    ms.push_back({fstar.grid->nodes[j], -fstar.values[j].value()});
  return ms;
}

// Pointwise max of affine evaluations; the other face of the biconjugate.
inline ExtReal envelope_from_minorants(const std::vector<AffineMinorant>& ms,
                                       const Point& x) {
  if (ms.empty())
    throw std::invalid_argument("envelope_from_minorants: empty collection");
  double best = -std::numeric_limits<double>::infinity();
  for (const AffineMinorant& m : ms) best = std::max(best, m(x));
  return ExtReal(best);
}

struct BiconjugateOptions {
  // Two-radius probe for +inf detection: recompute f** against a dual grid
  // probe_factor times wider; growth beyond growth_threshold flags the node
  // as divergent (its true value is +inf, not the finite sample).
  bool divergence_probe = true;
  double probe_factor = 1.5;
  double growth_threshold = 0.10;
  std::size_t max_nodes = kDefaultNodeBudget;
};

struct ConjugateReport {
  GridFn f;
  GridFn fstar;       // on the dual grid
  GridFn fstarstar;   // back on the primal grid
  std::vector<std::size_t> fstar_argmax;      // dual node -> primal maximizer
  std::vector<std::size_t> fstarstar_argmax;  // primal node -> dual maximizer
  double max_gap_on_dom = 0.0;    // max f - f** over finite-f nodes
  double max_violation = 0.0;     // max f** - f over finite-f nodes (<= ~0)
  bool origin_in_dom = false;
  double gap_at_origin = 0.0;
  std::vector<std::size_t> divergent;  // primal nodes whose f** grows with radius
  std::vector<char> divergent_mask;
};

inline ConjugateReport biconjugate(const GridFn& f, GridPtr dual_grid,
                                   const BiconjugateOptions& opts = {}) {
  ConjugateReport rep;
  rep.f = f;
  rep.fstar = monotone_conjugate(f, dual_grid, &rep.fstar_argmax);
  rep.fstarstar = monotone_conjugate(rep.fstar, f.grid, &rep.fstarstar_argmax);

  rep.max_gap_on_dom = -std::numeric_limits<double>::infinity();
  rep.max_violation = -std::numeric_limits<double>::infinity();
  bool any_finite = false;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f.values[i].is_inf()) continue;
    any_finite = true;
    const double gap = f.values[i].value() - rep.fstarstar.values[i].value();
    rep.max_gap_on_dom = std::max(rep.max_gap_on_dom, gap);
    rep.max_violation = std::max(rep.max_violation, -gap);
  }
  if (!any_finite) {
    rep.max_gap_on_dom = 0.0;
    rep.max_violation = 0.0;
  }

  const std::size_t origin = f.grid->origin_index();
  if (origin != Grid::npos && f.values[origin].is_finite()) {
    rep.origin_in_dom = true;
    rep.gap_at_origin =
        f.values[origin].value() - rep.fstarstar.values[origin].value();
  }

  rep.divergent_mask.assign(f.size(), 0);
  if (opts.divergence_probe) {
    GridPtr wide = build_grid(dual_grid->cone, dual_grid->radius * opts.probe_factor,
                              dual_grid->spacing, opts.max_nodes);
    const GridFn fstar_wide = monotone_conjugate(f, wide);
    const GridFn fss_wide = monotone_conjugate(fstar_wide, f.grid);
    for (std::size_t i = 0; i < f.size(); ++i) {
      const double v = rep.fstarstar.values[i].value();
      const double vw = fss_wide.values[i].value();
      if (vw - v > opts.growth_threshold * std::max(std::abs(v), 1e-9)) {
        rep.divergent.push_back(i);
        rep.divergent_mask[i] = 1;
      }
    }
  }
  return rep;
}

// f(x) + f*(u) - <x, u> for grid indices; >= 0 up to rounding, and ~0 exactly
// when u is a discrete subgradient of f at x.
inline double fenchel_young_gap(const GridFn& f, const GridFn& fstar,
                                std::size_t x_index, std::size_t u_index) {
  if (x_index >= f.size() || u_index >= fstar.size())
    throw std::invalid_argument("fenchel_young_gap: index out of range");
  if (f.values[x_index].is_inf())
    throw std::invalid_argument("fenchel_young_gap: f(x) = +inf");
  return f.values[x_index].value() + fstar.values[u_index].value() -
         inner(f.grid->nodes[x_index], fstar.grid->nodes[u_index]);
}

struct SubgradientReport {
  std::size_t eligible = 0;
  std::size_t probed = 0;
  std::size_t violations = 0;       // extracted slope outside the cone
  double worst_membership = 0.0;    // most negative membership margin seen
  double max_support_gap = 0.0;     // Fenchel-Young gap of the extracted slope
};

// Checks the gradient-in-cone fact on interior nodes of dom f: the local
// slope (central differences along every ambient axis) must be a cone member.
// Eligible probes are nodes whose 2d axis neighbors all exist with finite f.
// Each extracted slope also gets a supporting-minorant certificate: its
// Fenchel-Young gap against the grid, which is ~0 when the slope supports f
// at the probe.
inline SubgradientReport subgradient_in_cone_check(const GridFn& f,
                                                   std::size_t n_probes,
                                                   RngSeed seed,
                                                   double tol = 1e-6) {
  const Grid& g = *f.grid;
  const std::size_t dim = g.cone.ambient_dim();
  const double h = g.spacing;

  std::vector<std::size_t> eligible;
  std::vector<std::vector<std::size_t>> nb_plus, nb_minus;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f.values[i].is_inf()) continue;
    std::vector<std::size_t> plus(dim), minus(dim);
    bool ok = true;
    for (std::size_t a = 0; a < dim && ok; ++a) {
      std::vector<int> key = g.multi_index[i];
      key[a] += 1;
      plus[a] = g.find_key(key);
      key[a] -= 2;
      minus[a] = g.find_key(key);
      ok = plus[a] != Grid::npos && minus[a] != Grid::npos &&
           f.values[plus[a]].is_finite() && f.values[minus[a]].is_finite();
    }
    if (!ok) continue;
    eligible.push_back(i);
    nb_plus.push_back(std::move(plus));
    nb_minus.push_back(std::move(minus));
  }
  if (eligible.empty())
    throw std::runtime_error("subgradient_in_cone_check: no interior probe nodes");

  Rng rng(seed);
  SubgradientReport rep;
  rep.eligible = eligible.size();
  rep.worst_membership = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n_probes; ++k) {
    const std::size_t e = rng.uniform_index(eligible.size());
    const std::size_t i = eligible[e];
    Point u(dim);
    for (std::size_t a = 0; a < dim; ++a)
      u[a] = (f.values[nb_plus[e][a]].value() - f.values[nb_minus[e][a]].value()) /
             (2.0 * h);
    ++rep.probed;
    if (!contains(g.cone, u, tol)) ++rep.violations;

    // Membership margin, for reporting.
    double margin = 0.0;
    switch (g.cone.kind) {
      case ConeKind::orthant:
        margin = *std::min_element(u.c.begin(), u.c.end());
        break;
      case ConeKind::psd:
        margin = min_eigenvalue(g.cone.param, vec_to_sym(g.cone.param, u));
        break;
      case ConeKind::lorentz:
        margin = u[0] - lorentz_tail_norm(u);
        break;
    }
    rep.worst_membership = std::min(rep.worst_membership, margin);

    const double gap = f.values[i].value() + conjugate_at(f, u).value -
                       inner(g.nodes[i], u);
    rep.max_support_gap = std::max(rep.max_support_gap, gap);
  }
  return rep;
}

// --- fast transform on orthant box grids -------------------------------------
//
// On a full box lattice the sup factorizes axis by axis into one-dimensional
// discrete Legendre transforms. Each 1-D pass is the classic linear-time
// upper-envelope-of-lines merge: as the dual coordinate grows, the maximizer
// index never moves left, so a single pointer sweeps each line.

namespace detail {

// One line: values f_k at coordinates t_k = k*h, queries at the same
// coordinates. +inf entries contribute no line; a line with no finite entry
// yields -inf everywhere. Asserts the monotone-argmax property as it goes.
// f must not alias out.
inline void llt_line(const std::vector<double>& ts, const double* f,
                     std::ptrdiff_t stride, double* out,
                     std::vector<int>& hull) {
  const int n = static_cast<int>(ts.size());
  hull.clear();
  auto slope = [&](int k) { return ts[static_cast<std::size_t>(k)]; };
  auto icept = [&](int k) { return -f[k]; };
  for (int k = 0; k < n; ++k) {
    if (!std::isfinite(f[k])) continue;
    const double m3 = slope(k), b3 = icept(k);
    while (hull.size() >= 2) {
      const int l1 = hull[hull.size() - 2];
      const int l2 = hull[hull.size() - 1];
      const double m1 = slope(l1), b1 = icept(l1);
      const double m2 = slope(l2), b2 = icept(l2);
      // l2 never strictly wins once l3 overtakes l1 no later than l2 did.
      if ((b3 - b1) * (m2 - m1) >= (b2 - b1) * (m3 - m1))
        hull.pop_back();
      else
        break;
    }
    hull.push_back(k);
  }

  if (hull.empty()) {
    for (int j = 0; j < n; ++j)
      out[j * stride] = -std::numeric_limits<double>::infinity();
    return;
  }

  std::size_t ptr = 0;
  int prev_arg = hull[0];
  for (int j = 0; j < n; ++j) {
    const double y = ts[static_cast<std::size_t>(j)];
    while (ptr + 1 < hull.size() &&
           slope(hull[ptr + 1]) * y + icept(hull[ptr + 1]) >
               slope(hull[ptr]) * y + icept(hull[ptr]))
      ++ptr;
    const int arg = hull[ptr];
    if (arg < prev_arg)
      throw std::logic_error("fast transform: monotone-argmax property violated");
    prev_arg = arg;
    out[j * stride] = slope(arg) * y + icept(arg);
  }
}

}  // namespace detail

// Conjugate of f on its own grid, for orthant box grids, matching the naive
// transform to rounding. Runs d axis passes of the 1-D merge.
inline GridFn fast_conjugate_orthant(const GridFn& f) {
  const Grid& g = *f.grid;
  if (g.cone.kind != ConeKind::orthant)
    throw std::invalid_argument("fast_conjugate_orthant: orthant grids only");
  if (!g.box) throw std::invalid_argument("fast_conjugate_orthant: ragged grid");
  f.require_proper();

  const std::size_t dim = g.cone.ambient_dim();
  const int n_axis = g.box_sizes[0];
  std::vector<double> ts(static_cast<std::size_t>(n_axis));
  for (int k = 0; k < n_axis; ++k) ts[static_cast<std::size_t>(k)] = k * g.spacing;

  std::vector<double> buf(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) buf[i] = f.values[i].as_double();

  // Row-major, first axis slowest: stride of axis a is n^(d-1-a).
  for (std::size_t a = 0; a < dim; ++a) {
    std::ptrdiff_t stride = 1;
    for (std::size_t b = a + 1; b < dim; ++b) stride *= n_axis;
    const std::size_t block = static_cast<std::size_t>(stride) * n_axis;
    const std::size_t n_blocks = f.size() / block;
    parallel_for(n_blocks * static_cast<std::size_t>(stride), [&](std::size_t w) {
      const std::size_t blk = w / static_cast<std::size_t>(stride);
      const std::size_t off = w % static_cast<std::size_t>(stride);
      std::vector<int> hull;
      std::vector<double> line(static_cast<std::size_t>(n_axis));
      double* base = buf.data() + blk * block + off;
      for (int k = 0; k < n_axis; ++k)
        line[static_cast<std::size_t>(k)] = base[k * stride];
      detail::llt_line(ts, line.data(), stride, base, hull);
    });
  }

  std::vector<ExtReal> vals(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (!std::isfinite(buf[i]))
      throw std::logic_error("fast transform produced a non-finite value");
    vals[i] = ExtReal(buf[i]);
  }
  return GridFn(f.grid, std::move(vals));
}

}  // namespace conecal
