#include "objnav/frontier.hpp"

#include "objnav/fmm.hpp"

#include <algorithm>
#include <cmath>

namespace objnav {

MaskGrid buildFrontierMap(const SemanticMap& map, int dilation_radius) {
  const int w = map.width();
  const int h = map.height();
  const auto& explored = map.explored();
  MaskGrid out = MaskGrid::Zero(w, h);
  const CellBox box = map.activeBox(1);
  if (box.empty()) return out;

  const MaskGrid blocked =
      dilateWithin(map.obstacle(), dilation_radius, box);
  static constexpr int dx4[] = {1, -1, 0, 0};
  static constexpr int dy4[] = {0, 0, 1, -1};
  for (int x = box.x0; x <= box.x1; ++x) {
    for (int y = box.y0; y <= box.y1; ++y) {
      if (!explored(x, y) || blocked(x, y)) continue;
      for (int k = 0; k < 4; ++k) {
        const int nx = x + dx4[k];
        const int ny = y + dy4[k];
        if (nx < 0 || nx >= w || ny < 0 || ny >= h) continue;
        if (!explored(nx, ny)) {
          out(x, y) = 1;
          break;
        }
      }
    }
  }
  return out;
}

std::vector<Frontier> extractFrontiers(const MaskGrid& frontier_grid,
                                       const SemanticMap& map,
                                       const FrontierParams& params) {
  int count = 0;
  const auto labels = labelComponents(frontier_grid, Connectivity::Eight, &count);
  std::vector<std::vector<Cell>> regions(std::size_t(count));
  const int w = int(frontier_grid.rows());
  const int h = int(frontier_grid.cols());
  for (int x = 0; x < w; ++x)
    for (int y = 0; y < h; ++y)
      if (labels(x, y) >= 0) regions[std::size_t(labels(x, y))].push_back({x, y});

  std::vector<Frontier> out;
  for (auto& region : regions) {
    if (int(region.size()) < params.min_region_size) continue;
    Frontier f;
    f.cells = std::move(region);

    double sx = 0, sy = 0;
    for (const Cell& c : f.cells) {
      sx += c.x;
      sy += c.y;
    }
    Cell center{int(std::llround(sx / double(f.cells.size()))),
                int(std::llround(sy / double(f.cells.size())))};
    if (std::find(f.cells.begin(), f.cells.end(), center) == f.cells.end()) {
      double best = kInfinity;
      Cell snap = f.cells.front();
      for (const Cell& c : f.cells) {
        const double d = cellDistance(c, center);
        if (d < best || (d == best && c < snap)) {
          best = d;
          snap = c;
        }
      }
      center = snap;
    }
    f.center = center;

    const int r = params.object_radius;
    std::vector<bool> seen(std::size_t(map.categories()), false);
    const int x0 = std::max(0, center.x - r);
    const int x1 = std::min(map.width() - 1, center.x + r);
    const int y0 = std::max(0, center.y - r);
    const int y1 = std::min(map.height() - 1, center.y + r);
    for (int k = 0; k < map.categories(); ++k) {
      const MaskGrid& ch = map.channel(map.objectChannel(k));
      for (int x = x0; x <= x1 && !seen[std::size_t(k)]; ++x)
        for (int y = y0; y <= y1; ++y)
          if (ch(x, y) && cellDistance({x, y}, center) <= r) {
            seen[std::size_t(k)] = true;
            break;
          }
    }
    for (int k = 0; k < map.categories(); ++k)
      if (seen[std::size_t(k)]) f.nearby_objects.push_back(k);
    out.push_back(std::move(f));
  }
  return out;
}

long unexploredWithin(const SemanticMap& map, Cell center, int radius) {
  const auto& explored = map.explored();
  long count = 0;
  const int x0 = std::max(0, center.x - radius);
  const int x1 = std::min(map.width() - 1, center.x + radius);
  const int y0 = std::max(0, center.y - radius);
  const int y1 = std::min(map.height() - 1, center.y + radius);
  for (int x = x0; x <= x1; ++x)
    for (int y = y0; y <= y1; ++y)
      if (!explored(x, y) && cellDistance({x, y}, center) <= radius) ++count;
  return count;
}

std::vector<double> frontierCosts(const std::vector<Frontier>& frontiers,
                                  Cell agent_cell, const MaskGrid& traversable,
                                  const SemanticMap& map) {
  std::vector<double> costs(frontiers.size(), kInfinity);
  if (frontiers.empty()) return costs;

  FmmOptions opts;
  CellBox box = map.activeBox(4);
  box.expandTo(agent_cell);
  for (const Frontier& f : frontiers) box.expandTo(f.center);
  opts.window = box.grown(2, map.width(), map.height());
  for (const Frontier& f : frontiers) opts.stop_when_frozen.push_back(f.center);

  DistanceField<float> field;
  try {
    field = fmmDistanceField<float>(traversable, std::array{agent_cell}, opts);
  } catch (const std::invalid_argument&) {
    return costs;  // agent cell blocked in the belief map
  }
  for (std::size_t i = 0; i < frontiers.size(); ++i) {
    const Cell c = frontiers[i].center;
    if (field.reachable(c)) costs[i] = double(field.at(c));
  }
  return costs;
}

double scoreFrontierCu(const Frontier& frontier, Cell agent_cell,
                       const SemanticMap& map, const MaskGrid& traversable,
                       const FrontierParams& params) {
  const std::vector<Frontier> one{frontier};
  const double cost = frontierCosts(one, agent_cell, traversable, map)[0];
  if (!std::isfinite(cost)) return -kInfinity;
  const double utility =
      double(unexploredWithin(map, frontier.center, params.utility_radius));
  return utility - params.lambda_cu * cost;
}

}  // namespace objnav
