#pragma once

#include "objnav/grid_ops.hpp"
#include "objnav/types.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace objnav {

inline constexpr int kNoCategory = -1;

/// One placed object: a small blob of obstacle cells carrying a semantic
/// label. Decoys expose the same label to the detector but are not the real
/// thing; success and verifier ground truth ignore them.
struct ObjectInstance {
  int category = 0;
  std::vector<Cell> cells;
  bool decoy = false;
};

struct Scene {
  std::string id;
  int width = 0;           // cells
  int height = 0;          // cells
  double resolution = 0.05;  // meters per cell
  int category_count = 6;
  MaskGrid occupancy;          // 1 = obstacle
  Grid<std::int16_t> semantics;  // category index or kNoCategory
  Grid<std::int32_t> instance_ids;  // index into instances, or -1
  std::vector<ObjectInstance> instances;
  std::vector<Cell> spawn_points;

  Cell worldToCell(const Vec2& p) const {
    return {int(std::floor(p.x() / resolution)),
            int(std::floor(p.y() / resolution))};
  }
  Vec2 cellCenter(Cell c) const {
    return {(c.x + 0.5) * resolution, (c.y + 0.5) * resolution};
  }
  bool isFree(Cell c) const {
    return inBounds(c, width, height) && !occupancy(c.x, c.y);
  }
  /// Instances of a category that are real targets (non-decoy).
  std::vector<const ObjectInstance*> targetInstances(int category) const;
};

struct SceneGenParams {
  int width = 140;
  int height = 140;
  double resolution = 0.05;
  int room_count_min = 4;
  int room_count_max = 7;
  int room_size_min = 22;   // cells
  int room_size_max = 44;
  int corridor_width = 9;   // cells
  int objects_per_category = 2;
  int decoy_count = 2;
  int dead_end_count = 0;      // narrow stub corridors off room walls
  int dead_end_width = 3;      // cells; below planner dilation clearance
  int dead_end_length_min = 8;
  int dead_end_length_max = 18;
  int spawn_count = 5;
  int category_count = 6;
  int max_attempts = 40;
};

struct SensorConfig {
  double fov_deg = 90.0;
  int ray_count = 31;
  double max_range = 5.0;  // meters
};

struct Ray {
  double bearing = 0.0;       // degrees, relative to heading
  double hit_distance = 0.0;  // meters; == max_range when nothing was hit
  bool hit = false;
  bool hit_is_obstacle = false;
  int hit_label = kNoCategory;
  Cell hit_cell;       // scene cell of the hit (valid when hit)
  int hit_instance = -1;  // instance index, -1 when unlabeled
};

struct Observation {
  std::vector<Ray> rays;
};

struct Episode {
  std::string scene_id;
  Pose start;
  int target = 0;
  std::uint64_t seed = 0;
  int max_steps = 500;
  double success_radius = 1.0;
};

struct SceneGenError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Applies one action. move_forward advances 0.25 m along the heading unless
/// the swept path crosses an obstacle or leaves the scene, in which case the
/// pose is unchanged and collided is set. Turns rotate 30 degrees;
/// look_up/look_down/stop leave the pose untouched.
struct StepResult {
  Pose pose;
  bool collided = false;
};
StepResult step(const Scene& scene, const Pose& pose, Action action);

/// Labeled-depth raycast over the occupancy grid: one ray per bearing across
/// the FOV, each reporting the first obstacle cell it enters.
Observation sense(const Scene& scene, const Pose& pose, const SensorConfig& cfg);

/// True iff the pose is strictly within `radius` meters of the nearest cell
/// of any real (non-decoy) instance of the target category.
bool checkSuccess(const Scene& scene, const Pose& pose, int target,
                  double radius);

/// Procedural floorplan: rooms connected by corridors, objects against walls,
/// optional decoys and narrow dead ends. Deterministic under seed. Every
/// real object instance is reachable from every spawn point (verified by
/// flood fill); throws SceneGenError when the params cannot be satisfied.
Scene generateScene(std::uint64_t seed, const SceneGenParams& params);

/// Free cells adjacent (4-connected) to any cell of the instance.
std::vector<Cell> adjacentFreeCells(const Scene& scene,
                                    const ObjectInstance& inst);

// --- persistence (versioned JSON; occupancy run-length encoded) ---

std::string sceneToJson(const Scene& scene);
Scene sceneFromJson(const std::string& json_text);
void saveScene(const Scene& scene, const std::string& path);
Scene loadScene(const std::string& path);

std::string episodesToJson(const std::vector<Episode>& eps);
std::vector<Episode> episodesFromJson(const std::string& json_text);
void saveEpisodes(const std::vector<Episode>& eps, const std::string& path);
std::vector<Episode> loadEpisodes(const std::string& path);

/// Canonical category names used by scene generation and the prior table.
const std::vector<std::string>& defaultCategoryNames();

}  // namespace objnav
