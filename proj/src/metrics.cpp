#include "objnav/metrics.hpp"

#include "objnav/fmm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace objnav {

const char* toString(FailureClass fc) {
  switch (fc) {
    case FailureClass::Collision: return "collision";
    case FailureClass::Exploration: return "exploration";
    case FailureClass::Detection: return "detection";
  }
  return "?";
}

double episodeDtg(double final_distance, double success_radius) {
  return std::max(final_distance - success_radius, 0.0);
}

Metrics computeMetrics(const std::vector<EpisodeResult>& results,
                       double success_radius) {
  Metrics m;
  double sr_sum = 0.0, spl_sum = 0.0, dtg_sum = 0.0;
  for (const EpisodeResult& r : results) {
    if (!r.valid) continue;
    ++m.episodes;
    sr_sum += r.success ? 1.0 : 0.0;
    if (r.success)
      spl_sum += r.shortest_length / std::max(r.path_length, r.shortest_length);
    dtg_sum += episodeDtg(r.final_distance, success_radius);
  }
  if (m.episodes == 0)
    throw std::invalid_argument("computeMetrics: no valid episodes");
  m.sr = sr_sum / m.episodes;
  m.spl = spl_sum / m.episodes;
  m.dtg = dtg_sum / m.episodes;
  return m;
}

std::optional<double> shortestPathLength(const Scene& scene, const Pose& start,
                                         int target, double success_radius) {
  const MaskGrid free_mask = (scene.occupancy == 0).cast<std::uint8_t>();
  const Cell start_cell = scene.worldToCell(start.position());
  if (!scene.isFree(start_cell)) return std::nullopt;

  DistanceField<double> field;
  try {
    field = fmmDistanceField<double>(free_mask, std::array{start_cell});
  } catch (const std::invalid_argument&) {
    return std::nullopt;
  }

  double best = kInfinity;
  for (const ObjectInstance* inst : scene.targetInstances(target)) {
    for (const Cell& c : adjacentFreeCells(scene, *inst)) {
      if (field.reachable(c)) best = std::min(best, field.at(c));
    }
  }
  if (!std::isfinite(best)) return std::nullopt;
  const double meters = best * scene.resolution;
  return std::max(meters - success_radius, scene.resolution);
}

FailureClass classifyFailure(const std::vector<StepRecord>& trace,
                             const EpisodeResult& result, Mode final_mode) {
  if (result.stopped || final_mode == Mode::FalseTargetNav)
    return FailureClass::Detection;

  if (!trace.empty()) {
    const std::size_t window = std::min<std::size_t>(50, trace.size());
    const StepRecord& first = trace[trace.size() - window];
    const StepRecord& last = trace.back();
    const double net = std::hypot(last.pose.x - first.pose.x,
                                  last.pose.y - first.pose.y);
    if (net < 0.25) return FailureClass::Collision;
    std::size_t infeasible = 0;
    for (std::size_t i = trace.size() - window; i < trace.size(); ++i)
      if (!trace[i].feasible) ++infeasible;
    if (infeasible * 2 >= window) return FailureClass::Collision;
  }
  return FailureClass::Exploration;
}

}  // namespace objnav
