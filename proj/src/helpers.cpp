#include "objnav/helpers.hpp"

#include <cmath>
#include <stdexcept>

namespace objnav {

bool detectCollisionState(Action last_action, double displacement_m,
                          bool planner_feasible) {
  if (!planner_feasible) return true;
  return last_action == Action::MoveForward && displacement_m < 0.25;
}

std::vector<Cell> largestConnectedRegion(const MaskGrid& navigable) {
  int count = 0;
  const auto labels = labelComponents(navigable, Connectivity::Four, &count);
  if (count == 0)
    throw std::invalid_argument("largestConnectedRegion: empty navigable grid");

  std::vector<std::int64_t> sizes(std::size_t(count), 0);
  for (int x = 0; x < int(navigable.rows()); ++x)
    for (int y = 0; y < int(navigable.cols()); ++y)
      if (labels(x, y) >= 0) ++sizes[std::size_t(labels(x, y))];

  // Labels are assigned in lexicographic scan order, so on a size tie the
  // first label is the component containing the smallest cell.
  int best = 0;
  for (int k = 1; k < count; ++k)
    if (sizes[std::size_t(k)] > sizes[std::size_t(best)]) best = k;

  std::vector<Cell> region;
  region.reserve(std::size_t(sizes[std::size_t(best)]));
  for (int x = 0; x < int(navigable.rows()); ++x)
    for (int y = 0; y < int(navigable.cols()); ++y)
      if (labels(x, y) == best) region.push_back({x, y});
  return region;
}

Cell regionCentroid(std::span<const Cell> region) {
  if (region.empty())
    throw std::invalid_argument("regionCentroid: empty region");
  double sx = 0, sy = 0;
  for (const Cell& c : region) {
    sx += c.x;
    sy += c.y;
  }
  const Cell rounded{int(std::llround(sx / double(region.size()))),
                     int(std::llround(sy / double(region.size())))};
  for (const Cell& c : region)
    if (c == rounded) return rounded;

  Cell best = region.front();
  double best_d = cellDistance(best, rounded);
  for (const Cell& c : region) {
    const double d = cellDistance(c, rounded);
    if (d < best_d || (d == best_d && c < best)) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

double agentGoalDistance(const Vec2& agent, const Vec2& goal) {
  return (goal - agent).norm();
}

MaskGrid navigableArea(const SemanticMap& map) {
  return (map.explored() > 0 && map.obstacle() == 0).cast<std::uint8_t>();
}

DormancyResult dormancyCheck(double distance_m, std::optional<Cell> f_current,
                             std::optional<Cell> f_previous,
                             const HelperConfig& cfg, int sleep_counter) {
  if (sleep_counter > 0) return {true, sleep_counter - 1};
  const bool unchanged =
      f_current.has_value() && f_previous.has_value() && *f_current == *f_previous;
  if (distance_m < cfg.dormant_threshold && unchanged)
    return {true, cfg.sleep_time};
  return {false, 0};
}

std::optional<DetectionOutcome> detectionDecision(
    int step, std::optional<bool> verifier_answer,
    const FalseTargetRegistry& registry, const HelperConfig& cfg) {
  if (verifier_answer.has_value()) {
    return *verifier_answer ? DetectionOutcome::NavigateToTarget
                            : DetectionOutcome::MaskAndContinue;
  }
  if (step >= cfg.detection_threshold && !registry.empty())
    return DetectionOutcome::NavigateToFalseTarget;
  return std::nullopt;
}

}  // namespace objnav
