#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include "conecal/ext_real.hpp"
#include "conecal/grid.hpp"

namespace conecal {

// Extended-real-valued function sampled on a grid: the substrate of all the
// conjugate transforms. Proper means at least one finite value.
struct GridFn {
  GridPtr grid;
  std::vector<ExtReal> values;

  GridFn() = default;
  GridFn(GridPtr g, std::vector<ExtReal> v) : grid(std::move(g)), values(std::move(v)) {
    if (!grid || values.size() != grid->size())
      throw std::invalid_argument("GridFn: values do not align with grid nodes");
  }

  std::size_t size() const { return values.size(); }

  bool proper() const {
    for (const ExtReal& v : values)
      if (v.is_finite()) return true;
    return false;
  }

  void require_proper() const {
    if (!proper()) throw std::invalid_argument("grid function is improper (identically +inf)");
  }
};

inline GridFn sample_on_grid(GridPtr grid,
                             const std::function<ExtReal(const Point&)>& fn) {
  std::vector<ExtReal> vals;
  vals.reserve(grid->size());
  for (const Point& p : grid->nodes) vals.push_back(fn(p));
  return GridFn(std::move(grid), std::move(vals));
}

// Affine function x -> <slope, x> + offset with a cone slope; the building
// block of the biconjugate envelope.
struct AffineMinorant {
  Point slope;
  double offset = 0.0;

  double operator()(const Point& x) const { return inner(slope, x) + offset; }
};

}  // namespace conecal
