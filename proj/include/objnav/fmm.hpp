#pragma once

#include "objnav/grid_ops.hpp"
#include "objnav/types.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <span>
#include <stdexcept>
#include <vector>

namespace objnav {

/// Geodesic distance field over a traversable grid, in cell units.
/// Unreachable and blocked cells hold infinity().
template <class Scalar = float>
struct DistanceField {
  Grid<Scalar> dist;

  static constexpr Scalar infinity() {
    return std::numeric_limits<Scalar>::infinity();
  }
  bool reachable(Cell c) const {
    return inBounds(c, dist) && dist(c.x, c.y) < infinity();
  }
  Scalar at(Cell c) const { return dist(c.x, c.y); }
};

struct FmmOptions {
  /// Restrict the solve to this box (inclusive). Empty box means whole grid.
  CellBox window;
  /// Stop once all of these cells are frozen. Values outside the frozen set
  /// are left at infinity; values inside are final.
  std::vector<Cell> stop_when_frozen;
};

/// First-order fast-marching solve of |grad u| = 1 on a unit grid.
///
/// Each accepted cell gets the standard two-neighbor update: with a = min of
/// the frozen x-neighbors and b = min of the frozen y-neighbors,
///   u = min(a, b) + 1                   when |a - b| >= 1
///   u = (a + b + sqrt(2 - (a-b)^2)) / 2 otherwise,
/// and cells leave the narrow band in non-decreasing value order.
///
/// `traversable` is non-zero on cells the front may cross. Throws
/// std::invalid_argument when no source lies on a traversable cell.
template <class Scalar = float>
DistanceField<Scalar> fmmDistanceField(const MaskGrid& traversable,
                                       std::span<const Cell> sources,
                                       const FmmOptions& opts = {}) {
  const int w = int(traversable.rows());
  const int h = int(traversable.cols());
  const Scalar inf = DistanceField<Scalar>::infinity();

  CellBox box = opts.window;
  if (box.empty()) box = CellBox{0, 0, w - 1, h - 1};

  DistanceField<Scalar> field;
  field.dist = Grid<Scalar>::Constant(w, h, inf);

  enum State : std::uint8_t { kFar = 0, kNarrow = 1, kFrozen = 2 };
  MaskGrid state = MaskGrid::Zero(w, h);

  struct Node {
    Scalar value;
    Cell cell;
    bool operator>(const Node& o) const {
      if (value != o.value) return value > o.value;
      return o.cell < cell;  // deterministic pop order on equal values
    }
  };
  std::priority_queue<Node, std::vector<Node>, std::greater<Node>> narrow;

  bool any_source = false;
  for (const Cell& s : sources) {
    if (!box.contains(s) || !traversable(s.x, s.y)) continue;
    any_source = true;
    field.dist(s.x, s.y) = Scalar(0);
    state(s.x, s.y) = kNarrow;
    narrow.push({Scalar(0), s});
  }
  if (!any_source) {
    throw std::invalid_argument("fmmDistanceField: no traversable source cell");
  }

  // Early-exit bookkeeping.
  std::size_t pending = 0;
  MaskGrid watch;
  if (!opts.stop_when_frozen.empty()) {
    watch = MaskGrid::Zero(w, h);
    for (const Cell& c : opts.stop_when_frozen) {
      if (!inBounds(c, w, h) || watch(c.x, c.y)) continue;
      // Watched cells the front can never reach must not stall the exit.
      if (!box.contains(c) || !traversable(c.x, c.y)) continue;
      watch(c.x, c.y) = 1;
      ++pending;
    }
  }

  const auto solve_quadratic = [](Scalar a, Scalar b, Scalar inf_v) -> Scalar {
    const Scalar m = std::min(a, b);
    if (m >= inf_v) return inf_v;
    const Scalar d = (a < inf_v && b < inf_v) ? std::abs(a - b) : Scalar(2);
    if (d >= Scalar(1)) return m + Scalar(1);
    return (a + b + std::sqrt(Scalar(2) - d * d)) / Scalar(2);
  };

  static constexpr int dx4[] = {1, -1, 0, 0};
  static constexpr int dy4[] = {0, 0, 1, -1};

  while (!narrow.empty()) {
    const Node top = narrow.top();
    narrow.pop();
    const Cell c = top.cell;
    if (state(c.x, c.y) == kFrozen) continue;  // stale heap entry
    state(c.x, c.y) = kFrozen;

    if (pending > 0 && watch.size() > 0 && watch(c.x, c.y)) {
      watch(c.x, c.y) = 0;
      if (--pending == 0) return field;
    }

    for (int k = 0; k < 4; ++k) {
      const Cell n{c.x + dx4[k], c.y + dy4[k]};
      if (!box.contains(n)) continue;
      if (!traversable(n.x, n.y) || state(n.x, n.y) == kFrozen) continue;

      const auto axis_min = [&](int ddx, int ddy) -> Scalar {
        Scalar best = inf;
        for (int s : {-1, 1}) {
          const Cell q{n.x + s * ddx, n.y + s * ddy};
          if (!box.contains(q) || !traversable(q.x, q.y)) continue;
          if (state(q.x, q.y) != kFrozen) continue;
          best = std::min(best, field.dist(q.x, q.y));
        }
        return best;
      };
      const Scalar ux = axis_min(1, 0);
      const Scalar uy = axis_min(0, 1);
      const Scalar u = solve_quadratic(ux, uy, inf);
      if (u < field.dist(n.x, n.y)) {
        field.dist(n.x, n.y) = u;
        state(n.x, n.y) = kNarrow;
        narrow.push({u, n});
      }
    }
  }
  return field;
}

/// Steepest-descent neighbor of `c` in the field (8-connected), restricted to
/// traversable cells. Returns c itself when no neighbor strictly improves;
/// equal-valued candidates tie-break lexicographically.
template <class Scalar>
Cell descentNeighbor(const DistanceField<Scalar>& field,
                     const MaskGrid& traversable, Cell c) {
  static constexpr int dx8[] = {1, -1, 0, 0, 1, 1, -1, -1};
  static constexpr int dy8[] = {0, 0, 1, -1, 1, -1, 1, -1};
  Cell best = c;
  Scalar best_v = field.infinity();
  for (int k = 0; k < 8; ++k) {
    const Cell n{c.x + dx8[k], c.y + dy8[k]};
    if (!inBounds(n, field.dist) || !traversable(n.x, n.y)) continue;
    const Scalar v = field.dist(n.x, n.y);
    if (v < best_v || (v == best_v && v < field.infinity() && n < best)) {
      best_v = v;
      best = n;
    }
  }
  const Scalar own = field.reachable(c) ? field.at(c) : field.infinity();
  return best_v < own ? best : c;
}

}  // namespace objnav
