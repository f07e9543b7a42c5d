#pragma once

#include "objnav/mapping.hpp"
#include "objnav/policy.hpp"
#include "objnav/scene.hpp"

#include <string>
#include <vector>

namespace objnav {

/// RGB raster written as binary PPM (P6). Deterministic bytes for identical
/// input.
struct Image {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> rgb;

  Image(int w, int h, std::uint8_t r = 0, std::uint8_t g = 0, std::uint8_t b = 0);
  void set(int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b);
  void writePpm(const std::string& path) const;
};

/// Belief-map view: unexplored gray, explored light, obstacles black,
/// frontier cyan, objects in category hues, false targets magenta, visited
/// trail blue, agent green. The trace, when given, adds the trajectory and
/// goal markers.
Image renderMap(const SemanticMap& map,
                const std::vector<StepRecord>* trace = nullptr,
                int frontier_dilation_radius = 2);

/// Ground-truth view of a scene with an optional trajectory overlay (world
/// poses from the trace).
Image renderScene(const Scene& scene,
                  const std::vector<StepRecord>* trace = nullptr);

}  // namespace objnav
