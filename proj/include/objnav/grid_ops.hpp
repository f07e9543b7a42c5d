#pragma once

#include "objnav/types.hpp"

#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace objnav {

enum class Connectivity : std::uint8_t { Four = 4, Eight = 8 };

/// Morphological dilation of a binary mask by a Euclidean disk of the given
/// radius (in cells). radius <= 0 returns the input unchanged.
MaskGrid dilate(const MaskGrid& mask, int radius);

/// Same, but only cells inside `box` are produced; everything outside is 0.
/// Mask content outside the box still contributes to cells near the border.
MaskGrid dilateWithin(const MaskGrid& mask, int radius, const CellBox& box);

/// Labels connected regions of the non-zero cells. Labels start at 0 in
/// discovery order (lexicographic scan); background is -1.
Grid<std::int32_t> labelComponents(const MaskGrid& mask, Connectivity conn,
                                   int* component_count = nullptr);

/// All non-zero cells reachable from `seed` through non-zero cells.
std::vector<Cell> floodFrom(const MaskGrid& mask, Cell seed, Connectivity conn);

/// True when every cell of `targets` is reachable from `seed` through
/// non-zero cells of `mask` (targets themselves must be non-zero).
bool allReachable(const MaskGrid& mask, Cell seed, std::span<const Cell> targets,
                  Connectivity conn);

/// Grid line walk (Amanatides & Woo). Visits the cells crossed by the segment
/// from `a` to `b` (both in cell units, i.e. world / resolution), in order,
/// reporting the entry parameter t in the same units. The visitor returns
/// false to stop the walk. Cells outside [0,w)x[0,h) stop the walk and bump
/// `clipped` when provided.
void walkRay(const Vec2& a, const Vec2& b, int width, int height,
             const std::function<bool(Cell, double)>& visit,
             long* clipped = nullptr);

/// Cell containing a continuous point given in cell units.
inline Cell pointCell(const Vec2& p) {
  return {int(std::floor(p.x())), int(std::floor(p.y()))};
}

inline bool inBounds(Cell c, int width, int height) {
  return c.x >= 0 && c.x < width && c.y >= 0 && c.y < height;
}

template <class Scalar>
bool inBounds(Cell c, const Grid<Scalar>& g) {
  return inBounds(c, int(g.rows()), int(g.cols()));
}

}  // namespace objnav
