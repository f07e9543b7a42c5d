#pragma once

#include "objnav/grid_ops.hpp"
#include "objnav/mapping.hpp"
#include "objnav/types.hpp"

#include <optional>
#include <span>
#include <vector>

namespace objnav {

struct HelperConfig {
  double dormant_threshold = 0.50;  // meters
  int sleep_time = 20;              // advisor-free policy cycles
  int detection_threshold = 400;    // steps before the false-target fallback
  int k_stuck = 3;                  // consecutive blocked forwards before recovery
  bool sleep_counts_cycles = true;  // false: counter ticks per simulator step
};

/// Collision state per the two trigger conditions: a move_forward that
/// displaced less than the full 25 cm, or an infeasible local plan.
bool detectCollisionState(Action last_action, double displacement_m,
                          bool planner_feasible);

/// Largest 4-connected region of the non-zero cells. Ties go to the
/// component containing the lexicographically smallest cell. Throws
/// std::invalid_argument on an all-zero grid.
std::vector<Cell> largestConnectedRegion(const MaskGrid& navigable);

/// Rounded center of mass, snapped to the nearest member cell when the
/// rounded centroid falls outside the region (ties lexicographic).
Cell regionCentroid(std::span<const Cell> region);

/// Euclidean distance in meters between two world points.
double agentGoalDistance(const Vec2& agent, const Vec2& goal);

/// Explored-and-not-obstacle cells: the area the collision helper treats as
/// navigable when picking a recovery goal.
MaskGrid navigableArea(const SemanticMap& map);

struct DormancyResult {
  bool sleep = false;
  int sleep_counter = 0;
};

/// One dormancy-policy evaluation. An active counter keeps sleeping and
/// burns down; otherwise sleep starts when the agent sits within
/// dormant_threshold of the goal and the advisor's frontier choice has not
/// changed (identified by center cell).
DormancyResult dormancyCheck(double distance_m, std::optional<Cell> f_current,
                             std::optional<Cell> f_previous,
                             const HelperConfig& cfg, int sleep_counter);

struct FalseTargetEntry {
  std::vector<Cell> cells;  // map cells of the masked detection
  int step = 0;
};

/// False targets recorded during the episode, oldest first.
using FalseTargetRegistry = std::vector<FalseTargetEntry>;

enum class DetectionOutcome : std::uint8_t {
  NavigateToTarget,
  MaskAndContinue,
  NavigateToFalseTarget,
};

/// Resolution of a detection event (or of the late-episode fallback when
/// called without one, verifier_answer empty): a verified yes navigates to
/// the target, a no masks and records it, and past detection_threshold with
/// a recorded false target and no confirmed detection the most recent entry
/// becomes the goal. Returns nullopt when neither precondition applies.
std::optional<DetectionOutcome> detectionDecision(
    int step, std::optional<bool> verifier_answer,
    const FalseTargetRegistry& registry, const HelperConfig& cfg);

}  // namespace objnav
