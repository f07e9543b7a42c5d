#include "objnav/policy.hpp"

#include <algorithm>
#include <cmath>

namespace objnav {

const char* toString(Mode mode) {
  switch (mode) {
    case Mode::Explore: return "explore";
    case Mode::Untrap: return "untrap";
    case Mode::FreeExplore: return "free_explore";
    case Mode::TargetNav: return "target_nav";
    case Mode::FalseTargetNav: return "false_target_nav";
  }
  return "?";
}

namespace {

Cell nearestCell(std::span<const Cell> cells, Cell to) {
  Cell best = cells.front();
  double best_d = cellDistance(best, to);
  for (const Cell& c : cells) {
    const double d = cellDistance(c, to);
    if (d < best_d || (d == best_d && c < best)) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

Cell untrapGoal(const SemanticMap& map) {
  return regionCentroid(largestConnectedRegion(navigableArea(map)));
}

/// Advisor-free frontier choice: the cost-utility score from the frontier
/// map, using precomputed geodesic costs. Falls back to the open-region
/// centroid when nothing is reachable.
Cell cuGoal(const std::vector<Frontier>& frontiers,
            const std::vector<double>& costs, const SemanticMap& map,
            const FrontierParams& params, std::vector<std::string>& events) {
  std::optional<std::size_t> best;
  double best_score = -kInfinity;
  for (std::size_t i = 0; i < frontiers.size(); ++i) {
    if (!std::isfinite(costs[i])) continue;
    const double u =
        double(unexploredWithin(map, frontiers[i].center, params.utility_radius));
    const double s = u - params.lambda_cu * costs[i];
    if (s > best_score) {
      best_score = s;
      best = i;
    }
  }
  if (!best) {
    events.push_back("no_frontier_fallback");
    return untrapGoal(map);
  }
  return frontiers[*best].center;
}

}  // namespace

GlobalDecision planGlobal(PolicyState& state, SemanticMap& map,
                          const Pose& pose, const FrontierScorer& scorer,
                          const TargetVerifier* verifier,
                          const std::optional<DetectionEvent>& detection,
                          bool collision_event, int target,
                          std::uint64_t episode_id, const PolicyConfig& cfg) {
  GlobalDecision out;
  const Cell agent = map.agentCell();

  const auto finish = [&](Cell goal, Mode mode) {
    state.mode = mode;
    state.long_term_goal = goal;
    state.goal_age = 0;
    out.goal = goal;
    out.mode = mode;
    return out;
  };

  // (1) Detection: verify, then either pin the target or mask and carry on.
  if (detection && !state.target_confirmed) {
    bool answer = true;  // without the helper the detector is trusted
    if (cfg.toggles.detection && verifier) {
      VerifyEvidence ev;
      ev.truly_target = detection->truly_target;
      ev.cells = detection->map_cells;
      ev.episode_id = episode_id;
      ev.detection_index = state.detection_count;
      answer = verifier->verify(ev, target);
    }
    ++state.detection_count;
    const auto outcome =
        detectionDecision(state.step, answer, state.registry, cfg.helpers);
    if (outcome == DetectionOutcome::NavigateToTarget) {
      state.target_confirmed = true;
      state.nav_goal = nearestCell(detection->map_cells, agent);
      out.events.push_back("detection_yes");
      return finish(*state.nav_goal, Mode::TargetNav);
    }
    map.markFalseTarget(detection->map_cells);
    state.registry.push_back({detection->map_cells, state.step});
    out.events.push_back("detection_no");
  }

  // (2) Navigation modes persist; collisions inside them get a transient
  // recovery goal while the pinned goal survives.
  if (state.mode == Mode::TargetNav || state.mode == Mode::FalseTargetNav) {
    if (collision_event && cfg.toggles.collision) {
      out.events.push_back("untrap");
      state.goal_age = 0;
      state.long_term_goal = untrapGoal(map);
      out.goal = *state.long_term_goal;
      out.mode = state.mode;
      return out;
    }
    return finish(*state.nav_goal, state.mode);
  }

  // (3) Collision recovery toward the widest open area.
  if (collision_event && cfg.toggles.collision) {
    out.events.push_back("untrap");
    return finish(untrapGoal(map), Mode::Untrap);
  }

  // (4) Late-episode fallback onto the most recent recorded false target.
  if (cfg.toggles.detection) {
    const auto outcome =
        detectionDecision(state.step, std::nullopt, state.registry, cfg.helpers);
    if (outcome == DetectionOutcome::NavigateToFalseTarget &&
        !state.target_confirmed) {
      const auto& cells = state.registry.back().cells;
      state.nav_goal = nearestCell(cells, agent);
      out.events.push_back("false_target_nav");
      return finish(*state.nav_goal, Mode::FalseTargetNav);
    }
  }

  // (5) Exploration: frontier extraction feeds both the advisor and the
  // cost-utility scorer.
  const MaskGrid frontier_grid =
      buildFrontierMap(map, cfg.frontier.dilation_radius);
  const std::vector<Frontier> frontiers =
      extractFrontiers(frontier_grid, map, cfg.frontier);
  MaskGrid traversable = traversableGrid(map, cfg.planner.dilation_radius);
  {  // the agent pocket must be open or every cost is infinite
    const int r = cfg.planner.dilation_radius;
    const auto& obstacle = map.obstacle();
    for (int dx = -r; dx <= r; ++dx)
      for (int dy = -r; dy <= r; ++dy) {
        const Cell c{agent.x + dx, agent.y + dy};
        if (dx * dx + dy * dy <= r * r && inBounds(c, traversable) &&
            !obstacle(c.x, c.y))
          traversable(c.x, c.y) = 1;
      }
  }
  const std::vector<double> costs =
      frontierCosts(frontiers, agent, traversable, map);

  // (5a) Asleep: keep exploring without the advisor.
  if (cfg.toggles.exploration && state.sleep_counter > 0) {
    const auto dr = dormancyCheck(kInfinity, std::nullopt, std::nullopt,
                                  cfg.helpers, state.sleep_counter);
    state.sleep_counter = dr.sleep_counter;
    out.events.push_back("sleep");
    return finish(cuGoal(frontiers, costs, map, cfg.frontier, out.events),
                  Mode::FreeExplore);
  }

  if (frontiers.empty()) {
    out.events.push_back("no_frontier_fallback");
    return finish(untrapGoal(map), Mode::Explore);
  }

  // (5b) Advisor-led selection.
  std::vector<double> scores(frontiers.size());
  for (std::size_t i = 0; i < frontiers.size(); ++i)
    scores[i] = scorer.score(frontiers[i].nearby_objects, target);
  out.advisor_invoked = true;
  const std::size_t pick = *selectFrontier(scores, costs);
  const Cell f_llm = frontiers[pick].center;

  if (cfg.toggles.exploration) {
    const double d =
        state.long_term_goal
            ? agentGoalDistance(pose.position(),
                                map.cellToWorld(*state.long_term_goal))
            : kInfinity;
    const auto dr =
        dormancyCheck(d, f_llm, state.f_llm_previous, cfg.helpers, 0);
    if (dr.sleep) {
      state.sleep_counter = dr.sleep_counter;
      state.f_llm_previous = f_llm;
      out.events.push_back("sleep_start");
      return finish(cuGoal(frontiers, costs, map, cfg.frontier, out.events),
                    Mode::FreeExplore);
    }
  }
  state.f_llm_previous = f_llm;
  return finish(f_llm, Mode::Explore);
}

PolicyRunner::PolicyRunner(const Scene& scene, const Episode& episode,
                           const PolicyConfig& cfg, const MapConfig& map_cfg,
                           const SensorConfig& sensor_cfg,
                           const FrontierScorer& scorer,
                           const TargetVerifier* verifier)
    : scene_(scene), episode_(episode), cfg_(cfg), sensor_(sensor_cfg),
      scorer_(scorer), verifier_(verifier), planner_(cfg.planner),
      pose_(episode.start) {
  MapConfig mc = map_cfg;
  mc.categories = scene.category_count;
  map_.reset(mc, pose_.position());
  PlannerParams pp = cfg_.planner;
  pp.stop_radius = episode_.success_radius * cfg_.policy.stop_radius_factor;
  planner_ = LocalPlanner(pp);
}

std::optional<DetectionEvent> PolicyRunner::extractDetection(
    const Observation& obs) {
  if (state_.target_confirmed) return std::nullopt;
  DetectionEvent ev;
  std::vector<int> new_instances;
  for (const Ray& ray : obs.rays) {
    if (!ray.hit || ray.hit_label != episode_.target) continue;
    if (ray.hit_instance < 0 || handled_instances_.count(ray.hit_instance))
      continue;
    if (std::find(new_instances.begin(), new_instances.end(),
                  ray.hit_instance) == new_instances.end())
      new_instances.push_back(ray.hit_instance);
    const Cell mc = map_.rayHitCell(pose_, ray);
    if (map_.contains(mc) &&
        std::find(ev.map_cells.begin(), ev.map_cells.end(), mc) ==
            ev.map_cells.end())
      ev.map_cells.push_back(mc);
  }
  if (new_instances.empty() || ev.map_cells.empty()) return std::nullopt;
  for (int id : new_instances) {
    handled_instances_.insert(id);
    if (!scene_.instances[std::size_t(id)].decoy) ev.truly_target = true;
  }
  if (!ev.truly_target)
    for (int id : new_instances) false_instances_.insert(id);
  return ev;
}

StepRecord PolicyRunner::runStep() {
  StepRecord rec;
  rec.step = state_.step;
  rec.pose = pose_;

  const Observation obs = sense(scene_, pose_, sensor_);
  map_.integrate(pose_, obs);

  // Keep already-masked instances out of the object channels as more of
  // their cells come into view.
  if (!false_instances_.empty()) {
    std::vector<Cell> stale;
    for (const Ray& ray : obs.rays) {
      if (!ray.hit || ray.hit_instance < 0) continue;
      if (!false_instances_.count(ray.hit_instance)) continue;
      const Cell mc = map_.rayHitCell(pose_, ray);
      if (map_.contains(mc)) stale.push_back(mc);
    }
    if (!stale.empty()) map_.markFalseTarget(stale);
  }

  const auto detection = extractDetection(obs);
  const bool collision_event =
      state_.stuck_streak >= cfg_.helpers.k_stuck || !state_.last_plan_feasible;

  const bool scheduled = state_.step % cfg_.policy.goal_cadence == 0;
  if (scheduled || detection.has_value() || collision_event) {
    const GlobalDecision decision =
        planGlobal(state_, map_, pose_, scorer_, verifier_, detection,
                   collision_event, episode_.target, episode_.seed, cfg_);
    rec.events = decision.events;
    if (collision_event) rec.events.push_back("collision");
  } else {
    ++state_.goal_age;
  }

  const Cell goal = *state_.long_term_goal;
  const bool allow_stop =
      state_.mode == Mode::TargetNav || state_.mode == Mode::FalseTargetNav;
  const PlanResult plan = planner_.plan(map_, pose_, goal, allow_stop);
  state_.last_plan_feasible = plan.feasible;
  if (!plan.feasible) rec.events.push_back("infeasible");

  rec.action = plan.action;
  rec.mode = state_.mode;
  rec.goal = goal;
  rec.sleep_counter = state_.sleep_counter;
  rec.feasible = plan.feasible;

  const StepResult result = step(scene_, pose_, plan.action);
  rec.displacement = (result.pose.position() - pose_.position()).norm();
  path_length_ += rec.displacement;
  if (plan.action == Action::MoveForward)
    state_.stuck_streak = result.collided ? state_.stuck_streak + 1 : 0;
  pose_ = result.pose;

  ++state_.step;
  if (plan.action == Action::Stop) {
    done_ = true;
    stopped_ = true;
    success_ = checkSuccess(scene_, pose_, episode_.target,
                            episode_.success_radius);
  } else if (state_.step >= episode_.max_steps) {
    done_ = true;
  }
  trace_.push_back(rec);
  return rec;
}

const std::vector<StepRecord>& PolicyRunner::run() {
  while (!done_) runStep();
  return trace_;
}

}  // namespace objnav
