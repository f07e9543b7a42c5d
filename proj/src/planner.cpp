#include "objnav/planner.hpp"

#include <cmath>

namespace objnav {

MaskGrid traversableGrid(const SemanticMap& map, int dilation_radius) {
  const CellBox box = map.activeBox(dilation_radius + 2);
  MaskGrid out = MaskGrid::Constant(map.width(), map.height(), 1);
  if (box.empty()) return out;
  const MaskGrid blocked = dilateWithin(map.obstacle(), dilation_radius, box);
  for (int x = box.x0; x <= box.x1; ++x)
    for (int y = box.y0; y <= box.y1; ++y)
      if (blocked(x, y)) out(x, y) = 0;
  return out;
}

std::optional<Cell> snapToTraversable(const MaskGrid& traversable, Cell goal,
                                      int radius) {
  if (inBounds(goal, traversable) && traversable(goal.x, goal.y)) return goal;
  std::optional<Cell> best;
  double best_d = kInfinity;
  for (int r = 1; r <= radius; ++r) {
    for (int dx = -r; dx <= r; ++dx) {
      for (int dy = -r; dy <= r; ++dy) {
        if (std::max(std::abs(dx), std::abs(dy)) != r) continue;  // ring only
        const Cell c{goal.x + dx, goal.y + dy};
        if (!inBounds(c, traversable) || !traversable(c.x, c.y)) continue;
        const double d = cellDistance(c, goal);
        if (d < best_d || (d == best_d && (!best || c < *best))) {
          best_d = d;
          best = c;
        }
      }
    }
    // A hit at ring r can only be beaten inside ring r+1 by a diagonal
    // offset; one extra ring settles it.
    if (best && r >= int(std::ceil(best_d))) break;
  }
  return best;
}

bool LocalPlanner::fieldUsable(const SemanticMap& map, Cell agent) const {
  if (!field_valid_) return false;
  if (field_.reachable(agent)) return true;
  // The cached wave may simply not have swept this far (early exit) or the
  // agent hugs a wall; a neighbor value is still enough to descend.
  static constexpr int dx8[] = {1, -1, 0, 0, 1, 1, -1, -1};
  static constexpr int dy8[] = {0, 0, 1, -1, 1, -1, 1, -1};
  for (int k = 0; k < 8; ++k)
    if (field_.reachable({agent.x + dx8[k], agent.y + dy8[k]})) return true;
  return false;
}

void LocalPlanner::recompute(const SemanticMap& map, Cell agent, Cell goal) {
  traversable_ = traversableGrid(map, params_.dilation_radius);
  // The agent's own pocket must be crossable even when it hugs a wall (the
  // dilated band otherwise swallows its cell). Real observed obstacles stay
  // blocked.
  const int r = params_.dilation_radius;
  const auto& obstacle = map.obstacle();
  for (int dx = -r; dx <= r; ++dx)
    for (int dy = -r; dy <= r; ++dy) {
      const Cell c{agent.x + dx, agent.y + dy};
      if (dx * dx + dy * dy <= r * r && inBounds(c, traversable_) &&
          !obstacle(c.x, c.y))
        traversable_(c.x, c.y) = 1;
    }

  field_valid_ = false;
  field_goal_ = goal;
  field_obstacle_version_ = map.obstacleVersion();

  const auto source = snapToTraversable(traversable_, goal, params_.goal_snap_radius);
  if (!source) return;

  FmmOptions opts;
  CellBox box = map.activeBox(params_.dilation_radius + 4);
  box.expandTo(agent);
  box.expandTo(*source);
  opts.window = box.grown(2, map.width(), map.height());
  // The descent only reads values around the agent; everything the agent can
  // later walk through is frozen before the front reaches it.
  opts.stop_when_frozen = {agent};
  try {
    field_ = fmmDistanceField<float>(traversable_, std::array{*source}, opts);
    field_valid_ = true;
  } catch (const std::invalid_argument&) {
    field_valid_ = false;
  }
}

PlanResult LocalPlanner::plan(const SemanticMap& map, const Pose& pose,
                              Cell goal, bool allow_stop) {
  const Cell agent = map.worldToCell(pose.position());

  if (allow_stop && map.contains(goal)) {
    const double d = (map.cellToWorld(goal) - pose.position()).norm();
    if (d < params_.stop_radius) return {Action::Stop, true, true};
  }

  const bool stale = params_.recompute_each_step || !field_goal_ ||
                     *field_goal_ != goal ||
                     field_obstacle_version_ != map.obstacleVersion();
  if (stale || !fieldUsable(map, agent)) {
    recompute(map, agent, goal);
    if (!field_valid_ || !fieldUsable(map, agent)) {
      return {Action::TurnRight, false, false};
    }
  }

  const Cell next = descentNeighbor(field_, traversable_, agent);
  if (next == agent) {
    // At the field minimum but outside the stop radius (or stops disabled):
    // rotate and let the next cycle pick a fresh goal.
    return {Action::TurnRight, true, true};
  }

  const double desired =
      std::atan2(double(next.y - agent.y), double(next.x - agent.x)) * 180.0 / M_PI;
  const double diff = headingDiff(desired, pose.heading);
  if (std::abs(diff) <= params_.heading_tolerance_deg)
    return {Action::MoveForward, true, false};
  if (diff == 180.0) return {Action::TurnRight, true, false};  // stated tie-break
  return {diff > 0 ? Action::TurnLeft : Action::TurnRight, true, false};
}

}  // namespace objnav
