#pragma once

#include "objnav/advisors.hpp"
#include "objnav/helpers.hpp"
#include "objnav/mapping.hpp"
#include "objnav/planner.hpp"
#include "objnav/policy.hpp"
#include "objnav/scene.hpp"

#include <cstdint>
#include <string>

namespace objnav {

/// One config file covers every constant in the stack. Paper-aligned
/// defaults: 0.25 m steps, 30 degree turns, 500-step episodes, 10-step goal
/// cadence, 0.50 m dormant threshold, 20-cycle sleep, detection threshold
/// 400. success_radius defaults to 1.0 m (0.1 m selectable).
struct RunConfig {
  MapConfig map;
  SensorConfig sensor;
  SceneGenParams scene_gen;
  FrontierParams frontier;
  PlannerParams planner;
  HelperConfig helpers;
  PolicyParams policy;
  HelperToggles toggles;
  VerifierConfig verifier;

  // advisors
  std::string prior_path;  // empty: built-in table
  double prior_floor = 0.05;
  PriorAggregation prior_aggregation = PriorAggregation::Max;

  // run
  std::uint64_t master_seed = 7;
  int workers = 0;  // 0: hardware concurrency
  std::string scenes_dir = "scenes";
  std::string episodes_path = "episodes.json";
  bool save_traces = false;
  int max_steps = 500;
  double success_radius = 1.0;
};

/// Parses a config JSON, overlaying present keys onto the defaults.
/// Unknown keys are rejected to catch typos.
RunConfig configFromJson(const std::string& text);
RunConfig loadConfig(const std::string& path);
std::string configToJson(const RunConfig& cfg);

/// FNV-1a over the canonical JSON dump; embedded in run outputs.
std::uint64_t configHash(const RunConfig& cfg);

/// Policy-facing view of the config.
PolicyConfig policyConfig(const RunConfig& cfg);

/// Scorer from the config: the prior table at prior_path, or the built-in
/// defaults when unset.
CooccurrencePrior makeScorer(const RunConfig& cfg);

}  // namespace objnav
