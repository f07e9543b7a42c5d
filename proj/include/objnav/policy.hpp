#pragma once

#include "objnav/advisors.hpp"
#include "objnav/frontier.hpp"
#include "objnav/helpers.hpp"
#include "objnav/mapping.hpp"
#include "objnav/planner.hpp"
#include "objnav/scene.hpp"
#include "objnav/types.hpp"

#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

namespace objnav {

enum class Mode : std::uint8_t {
  Explore,        // advisor-selected frontier
  Untrap,         // collision recovery toward the largest open region
  FreeExplore,    // advisor asleep; cost-utility frontier
  TargetNav,      // verified detection; goal pinned on the target
  FalseTargetNav, // late-episode fallback onto a recorded false target
};

const char* toString(Mode mode);

struct PolicyParams {
  int goal_cadence = 10;            // steps between scheduled goal updates
  double stop_radius_factor = 0.8;  // stop radius as a fraction of the
                                    // success radius
};

struct HelperToggles {
  bool collision = true;
  bool exploration = true;
  bool detection = true;
};

/// Everything the global policy needs to decide a long-term goal.
struct PolicyConfig {
  FrontierParams frontier;
  HelperConfig helpers;
  PlannerParams planner;
  PolicyParams policy;
  HelperToggles toggles;
};

/// Newly observed cells carrying the target label, plus the ground truth the
/// verifier stand-in is entitled to.
struct DetectionEvent {
  std::vector<Cell> map_cells;
  bool truly_target = false;
};

struct PolicyState {
  Mode mode = Mode::Explore;
  std::optional<Cell> long_term_goal;
  std::optional<Cell> f_llm_previous;  // advisor pick, by center cell
  int sleep_counter = 0;
  FalseTargetRegistry registry;
  int step = 0;
  int goal_age = 0;
  bool target_confirmed = false;
  std::optional<Cell> nav_goal;  // pinned goal in the navigation modes
  int detection_count = 0;
  int stuck_streak = 0;
  bool last_plan_feasible = true;
};

struct GlobalDecision {
  Cell goal;
  Mode mode = Mode::Explore;
  bool advisor_invoked = false;
  std::vector<std::string> events;
};

/// One global-policy cycle, in the paper's priority order: detection first,
/// then collision recovery, then the false-target fallback, then dormant or
/// advisor-led frontier exploration. Updates state (mode, sleep counter,
/// registry, f_llm history, long-term goal) and masks rejected detections
/// into the map.
GlobalDecision planGlobal(PolicyState& state, SemanticMap& map,
                          const Pose& pose, const FrontierScorer& scorer,
                          const TargetVerifier* verifier,
                          const std::optional<DetectionEvent>& detection,
                          bool collision_event, int target,
                          std::uint64_t episode_id, const PolicyConfig& cfg);

/// Per-step trace record; serialized as one JSON line by the harness.
struct StepRecord {
  int step = 0;
  Pose pose;          // pose before the action
  Action action = Action::Stop;
  Mode mode = Mode::Explore;
  std::optional<Cell> goal;
  std::vector<std::string> events;
  int sleep_counter = 0;
  bool feasible = true;
  double displacement = 0.0;
};

/// Runs one episode: sense, integrate, plan the long-term goal on the
/// 10-step cadence or on event cycles, derive an action with the local
/// policy, and apply it to the world.
class PolicyRunner {
 public:
  PolicyRunner(const Scene& scene, const Episode& episode,
               const PolicyConfig& cfg, const MapConfig& map_cfg,
               const SensorConfig& sensor_cfg, const FrontierScorer& scorer,
               const TargetVerifier* verifier);

  /// Executes one simulator step. Call while !done().
  StepRecord runStep();

  bool done() const { return done_; }
  bool stopped() const { return stopped_; }
  bool success() const { return success_; }
  double pathLength() const { return path_length_; }
  const Pose& pose() const { return pose_; }
  const SemanticMap& map() const { return map_; }
  const PolicyState& state() const { return state_; }
  const std::vector<StepRecord>& trace() const { return trace_; }

  /// Runs the episode to completion and returns the trace.
  const std::vector<StepRecord>& run();

 private:
  std::optional<DetectionEvent> extractDetection(const Observation& obs);

  const Scene& scene_;
  Episode episode_;
  PolicyConfig cfg_;
  SensorConfig sensor_;
  const FrontierScorer& scorer_;
  const TargetVerifier* verifier_;
  SemanticMap map_;
  LocalPlanner planner_;
  PolicyState state_;
  Pose pose_;
  double path_length_ = 0.0;
  bool done_ = false;
  bool stopped_ = false;
  bool success_ = false;
  std::unordered_set<int> handled_instances_;
  std::unordered_set<int> false_instances_;
  std::vector<StepRecord> trace_;
};

}  // namespace objnav
