#pragma once

#include "objnav/mapping.hpp"
#include "objnav/types.hpp"

#include <vector>

namespace objnav {

/// A candidate exploration region: explored cells bordering unexplored
/// space, away from dilated obstacles.
struct Frontier {
  Cell center;
  std::vector<Cell> cells;
  std::vector<int> nearby_objects;  // category indices near the center
};

struct FrontierParams {
  int dilation_radius = 2;   // cells; obstacle growth before subtraction
  int min_region_size = 10;  // cells; smaller regions are dropped
  double lambda_cu = 0.5;    // cost weight in the cost-utility score
  int utility_radius = 20;   // cells; unexplored count window
  int object_radius = 30;    // cells; nearby-object window
};

/// Boundary of the explored region minus the dilated obstacle map: a cell is
/// a frontier candidate when it is explored, has an unexplored 4-neighbor,
/// and lies outside the dilated obstacles.
MaskGrid buildFrontierMap(const SemanticMap& map, int dilation_radius);

/// Connected regions (8-connected) of the frontier grid with at least
/// `min_region_size` cells. Region centers are rounded centroids, snapped to
/// the nearest member cell when the centroid falls off-region; nearby objects
/// are collected from the object channels within `object_radius` of the
/// center. Regions are ordered by discovery (lexicographic scan).
std::vector<Frontier> extractFrontiers(const MaskGrid& frontier_grid,
                                       const SemanticMap& map,
                                       const FrontierParams& params);

/// Cost-utility score U - lambda * C with U the unexplored-cell count within
/// utility_radius of the center and C the fast-marching geodesic distance
/// (cells) from the agent over `traversable`. Unreachable frontiers score
/// -infinity.
double scoreFrontierCu(const Frontier& frontier, Cell agent_cell,
                       const SemanticMap& map, const MaskGrid& traversable,
                       const FrontierParams& params);

/// Geodesic cost (cells) from the agent to every frontier center in one
/// fast-marching solve; infinity for unreachable centers.
std::vector<double> frontierCosts(const std::vector<Frontier>& frontiers,
                                  Cell agent_cell, const MaskGrid& traversable,
                                  const SemanticMap& map);

/// Unexplored-cell count within `radius` of `center`.
long unexploredWithin(const SemanticMap& map, Cell center, int radius);

}  // namespace objnav
