#pragma once

#include "objnav/policy.hpp"
#include "objnav/scene.hpp"
#include "objnav/types.hpp"

#include <optional>
#include <string>
#include <vector>

namespace objnav {

enum class FailureClass : std::uint8_t { Collision, Exploration, Detection };

const char* toString(FailureClass fc);

struct EpisodeResult {
  std::string scene_id;
  int episode_index = 0;
  int target = 0;
  bool success = false;
  double shortest_length = 0.0;  // meters, geodesic lower bound
  double path_length = 0.0;      // meters actually traveled
  double final_distance = 0.0;   // meters to the nearest real target at end
  int steps = 0;
  bool stopped = false;
  std::optional<FailureClass> failure;
  bool valid = true;             // false: excluded (e.g. unreachable target)
  std::string invalid_reason;
};

struct Metrics {
  double sr = 0.0;
  double spl = 0.0;
  double dtg = 0.0;  // mean over episodes
  int episodes = 0;
};

/// SR, SPL and mean DTG over valid results. Throws std::invalid_argument on
/// an empty (or all-invalid) result set.
Metrics computeMetrics(const std::vector<EpisodeResult>& results,
                       double success_radius);

/// Per-episode distance-to-goal term max(||x_T - G||_2 - d_s, 0).
double episodeDtg(double final_distance, double success_radius);

/// Geodesic shortest-path length (meters) from the start to the nearest real
/// instance of the target category on the ground-truth grid, minus the
/// success radius, floored at one cell. Nullopt when no instance is
/// reachable.
std::optional<double> shortestPathLength(const Scene& scene, const Pose& start,
                                         int target, double success_radius);

/// Buckets a failed episode: detection when it stopped somewhere wrong or
/// ended chasing a false target, collision when it ended pinned in place
/// (net displacement of the last 50 steps under one forward step, or a
/// majority of recent plans infeasible), exploration otherwise.
FailureClass classifyFailure(const std::vector<StepRecord>& trace,
                             const EpisodeResult& result, Mode final_mode);

}  // namespace objnav
