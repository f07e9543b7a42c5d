#include "objnav/grid_ops.hpp"

#include <cmath>
#include <deque>
#include <stdexcept>

namespace objnav {

namespace {

std::vector<Cell> diskOffsets(int radius) {
  std::vector<Cell> out;
  for (int dx = -radius; dx <= radius; ++dx)
    for (int dy = -radius; dy <= radius; ++dy)
      if (dx * dx + dy * dy <= radius * radius) out.push_back({dx, dy});
  return out;
}

}  // namespace

MaskGrid dilate(const MaskGrid& mask, int radius) {
  CellBox all{0, 0, int(mask.rows()) - 1, int(mask.cols()) - 1};
  return dilateWithin(mask, radius, all);
}

MaskGrid dilateWithin(const MaskGrid& mask, int radius, const CellBox& box) {
  const int w = int(mask.rows());
  const int h = int(mask.cols());
  MaskGrid out = MaskGrid::Zero(w, h);
  if (box.empty()) return out;
  if (radius <= 0) {
    for (int x = box.x0; x <= box.x1; ++x)
      for (int y = box.y0; y <= box.y1; ++y) out(x, y) = mask(x, y);
    return out;
  }
  const auto offsets = diskOffsets(radius);
  // Scatter from set cells; the source scan extends past the box so borders
  // see mask content just outside it.
  const int sx0 = std::max(0, box.x0 - radius);
  const int sx1 = std::min(w - 1, box.x1 + radius);
  const int sy0 = std::max(0, box.y0 - radius);
  const int sy1 = std::min(h - 1, box.y1 + radius);
  for (int x = sx0; x <= sx1; ++x) {
    for (int y = sy0; y <= sy1; ++y) {
      if (!mask(x, y)) continue;
      for (const Cell& d : offsets) {
        const int nx = x + d.x;
        const int ny = y + d.y;
        if (nx < box.x0 || nx > box.x1 || ny < box.y0 || ny > box.y1) continue;
        out(nx, ny) = 1;
      }
    }
  }
  return out;
}

Grid<std::int32_t> labelComponents(const MaskGrid& mask, Connectivity conn,
                                   int* component_count) {
  const int w = int(mask.rows());
  const int h = int(mask.cols());
  Grid<std::int32_t> labels = Grid<std::int32_t>::Constant(w, h, -1);
  static constexpr int dx8[] = {1, -1, 0, 0, 1, 1, -1, -1};
  static constexpr int dy8[] = {0, 0, 1, -1, 1, -1, 1, -1};
  const int ndirs = conn == Connectivity::Four ? 4 : 8;

  int next_label = 0;
  std::deque<Cell> queue;
  for (int x = 0; x < w; ++x) {
    for (int y = 0; y < h; ++y) {
      if (!mask(x, y) || labels(x, y) >= 0) continue;
      const int label = next_label++;
      labels(x, y) = label;
      queue.push_back({x, y});
      while (!queue.empty()) {
        const Cell c = queue.front();
        queue.pop_front();
        for (int k = 0; k < ndirs; ++k) {
          const int nx = c.x + dx8[k];
          const int ny = c.y + dy8[k];
          if (nx < 0 || nx >= w || ny < 0 || ny >= h) continue;
          if (!mask(nx, ny) || labels(nx, ny) >= 0) continue;
          labels(nx, ny) = label;
          queue.push_back({nx, ny});
        }
      }
    }
  }
  if (component_count) *component_count = next_label;
  return labels;
}

std::vector<Cell> floodFrom(const MaskGrid& mask, Cell seed, Connectivity conn) {
  std::vector<Cell> out;
  if (!inBounds(seed, mask) || !mask(seed.x, seed.y)) return out;
  const int w = int(mask.rows());
  const int h = int(mask.cols());
  static constexpr int dx8[] = {1, -1, 0, 0, 1, 1, -1, -1};
  static constexpr int dy8[] = {0, 0, 1, -1, 1, -1, 1, -1};
  const int ndirs = conn == Connectivity::Four ? 4 : 8;

  MaskGrid seen = MaskGrid::Zero(w, h);
  std::deque<Cell> queue{seed};
  seen(seed.x, seed.y) = 1;
  while (!queue.empty()) {
    const Cell c = queue.front();
    queue.pop_front();
    out.push_back(c);
    for (int k = 0; k < ndirs; ++k) {
      const int nx = c.x + dx8[k];
      const int ny = c.y + dy8[k];
      if (nx < 0 || nx >= w || ny < 0 || ny >= h) continue;
      if (!mask(nx, ny) || seen(nx, ny)) continue;
      seen(nx, ny) = 1;
      queue.push_back({nx, ny});
    }
  }
  return out;
}

bool allReachable(const MaskGrid& mask, Cell seed, std::span<const Cell> targets,
                  Connectivity conn) {
  if (!inBounds(seed, mask) || !mask(seed.x, seed.y)) return false;
  const auto cells = floodFrom(mask, seed, conn);
  MaskGrid reached = MaskGrid::Zero(mask.rows(), mask.cols());
  for (const Cell& c : cells) reached(c.x, c.y) = 1;
  for (const Cell& t : targets) {
    if (!inBounds(t, mask) || !reached(t.x, t.y)) return false;
  }
  return true;
}

void walkRay(const Vec2& a, const Vec2& b, int width, int height,
             const std::function<bool(Cell, double)>& visit, long* clipped) {
  const Vec2 d = b - a;
  const double len = d.norm();
  Cell cur = pointCell(a);
  if (len < 1e-12) {
    if (inBounds(cur, width, height)) {
      visit(cur, 0.0);
    } else if (clipped) {
      ++*clipped;
    }
    return;
  }
  const Vec2 dir = d / len;

  const int step_x = dir.x() > 0 ? 1 : (dir.x() < 0 ? -1 : 0);
  const int step_y = dir.y() > 0 ? 1 : (dir.y() < 0 ? -1 : 0);
  const double tdx = step_x != 0 ? 1.0 / std::abs(dir.x()) : kInfinity;
  const double tdy = step_y != 0 ? 1.0 / std::abs(dir.y()) : kInfinity;

  // Distance along the ray to the first x/y cell boundary.
  double tx, ty;
  if (step_x > 0)
    tx = (double(cur.x) + 1.0 - a.x()) * tdx;
  else if (step_x < 0)
    tx = (a.x() - double(cur.x)) * tdx;
  else
    tx = kInfinity;
  if (step_y > 0)
    ty = (double(cur.y) + 1.0 - a.y()) * tdy;
  else if (step_y < 0)
    ty = (a.y() - double(cur.y)) * tdy;
  else
    ty = kInfinity;

  double t = 0.0;
  while (t <= len) {
    if (!inBounds(cur, width, height)) {
      if (clipped) ++*clipped;
      return;
    }
    if (!visit(cur, t)) return;
    if (tx <= ty) {
      t = tx;
      tx += tdx;
      cur.x += step_x;
    } else {
      t = ty;
      ty += tdy;
      cur.y += step_y;
    }
  }
}

}  // namespace objnav
