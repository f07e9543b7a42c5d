#pragma once

#include "objnav/fmm.hpp"
#include "objnav/mapping.hpp"
#include "objnav/types.hpp"

#include <optional>

namespace objnav {

struct PlannerParams {
  int dilation_radius = 2;          // cells of obstacle growth
  double heading_tolerance_deg = 15.0;  // forward-vs-turn threshold
  double stop_radius = 0.8;         // meters; stop distance in target modes
  int goal_snap_radius = 20;        // cells to search for a traversable source
  bool recompute_each_step = false;  // force a fresh field every plan
};

struct PlanResult {
  Action action = Action::TurnRight;
  bool feasible = false;
  bool arrived = false;  // no strictly lower neighbor at the agent cell
};

/// Cells the local planner may cross: not within dilation_radius of an
/// observed obstacle. Unexplored space counts as traversable, since goals
/// are usually frontiers into unknown space.
MaskGrid traversableGrid(const SemanticMap& map, int dilation_radius);

/// Fast-marching local policy. Keeps the distance field between steps and
/// recomputes it when the goal moves, new obstacles appear, or the cached
/// field has no value around the agent.
class LocalPlanner {
 public:
  explicit LocalPlanner(const PlannerParams& params) : params_(params) {}

  /// One action toward `goal`. `allow_stop` enables the stop rule used in
  /// the target-navigation modes. An unreachable agent-to-goal pair yields
  /// feasible = false and a rotate-in-place fallback action.
  PlanResult plan(const SemanticMap& map, const Pose& pose, Cell goal,
                  bool allow_stop);

  /// Field used by the last plan() call (empty before the first call).
  const DistanceField<float>& lastField() const { return field_; }
  const PlannerParams& params() const { return params_; }

 private:
  bool fieldUsable(const SemanticMap& map, Cell agent) const;
  void recompute(const SemanticMap& map, Cell agent, Cell goal);

  PlannerParams params_;
  DistanceField<float> field_;
  MaskGrid traversable_;
  std::optional<Cell> field_goal_;
  int field_obstacle_version_ = -1;
  bool field_valid_ = false;
};

/// Nearest traversable cell to `goal` within `radius` (expanding square
/// search, Euclidean metric, lexicographic ties). Nullopt when none exists.
std::optional<Cell> snapToTraversable(const MaskGrid& traversable, Cell goal,
                                      int radius);

}  // namespace objnav
