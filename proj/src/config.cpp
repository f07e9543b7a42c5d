#include "objnav/config.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace objnav {

using nlohmann::json;

namespace {

// Overlay helper: assigns when the key is present, tracks consumed keys.
struct Section {
  const json& j;
  std::set<std::string> seen;

  explicit Section(const json& j_in) : j(j_in) {}
  template <class T>
  void get(const char* key, T& out) {
    seen.insert(key);
    if (j.contains(key)) out = j.at(key).get<T>();
  }
  void finish(const std::string& name) const {
    for (auto it = j.begin(); it != j.end(); ++it)
      if (!seen.count(it.key()))
        throw std::invalid_argument("config: unknown key '" + name + "." +
                                    it.key() + "'");
  }
};

}  // namespace

RunConfig configFromJson(const std::string& text) {
  RunConfig cfg;
  const json root = json::parse(text);
  std::set<std::string> top_seen;
  const auto section = [&](const char* name) -> json {
    top_seen.insert(name);
    return root.contains(name) ? root.at(name) : json::object();
  };

  {
    Section s(section("map"));
    s.get("width", cfg.map.width);
    s.get("height", cfg.map.height);
    s.get("resolution", cfg.map.resolution);
    s.get("categories", cfg.map.categories);
    s.finish("map");
  }
  {
    Section s(section("sensor"));
    s.get("fov_deg", cfg.sensor.fov_deg);
    s.get("ray_count", cfg.sensor.ray_count);
    s.get("max_range", cfg.sensor.max_range);
    s.finish("sensor");
  }
  {
    Section s(section("scene_gen"));
    s.get("width", cfg.scene_gen.width);
    s.get("height", cfg.scene_gen.height);
    s.get("resolution", cfg.scene_gen.resolution);
    s.get("room_count_min", cfg.scene_gen.room_count_min);
    s.get("room_count_max", cfg.scene_gen.room_count_max);
    s.get("room_size_min", cfg.scene_gen.room_size_min);
    s.get("room_size_max", cfg.scene_gen.room_size_max);
    s.get("corridor_width", cfg.scene_gen.corridor_width);
    s.get("objects_per_category", cfg.scene_gen.objects_per_category);
    s.get("decoy_count", cfg.scene_gen.decoy_count);
    s.get("dead_end_count", cfg.scene_gen.dead_end_count);
    s.get("dead_end_width", cfg.scene_gen.dead_end_width);
    s.get("dead_end_length_min", cfg.scene_gen.dead_end_length_min);
    s.get("dead_end_length_max", cfg.scene_gen.dead_end_length_max);
    s.get("spawn_count", cfg.scene_gen.spawn_count);
    s.get("category_count", cfg.scene_gen.category_count);
    s.get("max_attempts", cfg.scene_gen.max_attempts);
    s.finish("scene_gen");
  }
  {
    Section s(section("frontier"));
    s.get("dilation_radius", cfg.frontier.dilation_radius);
    s.get("min_region_size", cfg.frontier.min_region_size);
    s.get("lambda_cu", cfg.frontier.lambda_cu);
    s.get("utility_radius", cfg.frontier.utility_radius);
    s.get("object_radius", cfg.frontier.object_radius);
    s.finish("frontier");
  }
  {
    Section s(section("planner"));
    s.get("dilation_radius", cfg.planner.dilation_radius);
    s.get("heading_tolerance_deg", cfg.planner.heading_tolerance_deg);
    s.get("goal_snap_radius", cfg.planner.goal_snap_radius);
    s.get("recompute_each_step", cfg.planner.recompute_each_step);
    s.finish("planner");
  }
  {
    Section s(section("helpers"));
    s.get("dormant_threshold", cfg.helpers.dormant_threshold);
    s.get("sleep_time", cfg.helpers.sleep_time);
    s.get("detection_threshold", cfg.helpers.detection_threshold);
    s.get("k_stuck", cfg.helpers.k_stuck);
    s.get("sleep_counts_cycles", cfg.helpers.sleep_counts_cycles);
    s.finish("helpers");
  }
  {
    Section s(section("policy"));
    s.get("goal_cadence", cfg.policy.goal_cadence);
    s.get("stop_radius_factor", cfg.policy.stop_radius_factor);
    s.finish("policy");
  }
  {
    Section s(section("toggles"));
    s.get("collision", cfg.toggles.collision);
    s.get("exploration", cfg.toggles.exploration);
    s.get("detection", cfg.toggles.detection);
    s.finish("toggles");
  }
  {
    Section s(section("verifier"));
    s.get("epsilon_fp", cfg.verifier.epsilon_fp);
    s.get("epsilon_fn", cfg.verifier.epsilon_fn);
    s.get("seed", cfg.verifier.seed);
    s.finish("verifier");
  }
  {
    Section s(section("advisors"));
    s.get("prior_path", cfg.prior_path);
    s.get("floor", cfg.prior_floor);
    std::string agg = cfg.prior_aggregation == PriorAggregation::Max
                          ? "max"
                          : "noisy_or";
    s.get("aggregation", agg);
    if (agg == "max")
      cfg.prior_aggregation = PriorAggregation::Max;
    else if (agg == "noisy_or")
      cfg.prior_aggregation = PriorAggregation::NoisyOr;
    else
      throw std::invalid_argument("config: advisors.aggregation must be 'max' or 'noisy_or'");
    s.finish("advisors");
  }
  {
    Section s(section("run"));
    s.get("master_seed", cfg.master_seed);
    s.get("workers", cfg.workers);
    s.get("scenes_dir", cfg.scenes_dir);
    s.get("episodes", cfg.episodes_path);
    s.get("save_traces", cfg.save_traces);
    s.get("max_steps", cfg.max_steps);
    s.get("success_radius", cfg.success_radius);
    s.finish("run");
  }
  for (auto it = root.begin(); it != root.end(); ++it)
    if (!top_seen.count(it.key()))
      throw std::invalid_argument("config: unknown section '" + it.key() + "'");
  return cfg;
}

RunConfig loadConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return configFromJson(ss.str());
}

std::string configToJson(const RunConfig& cfg) {
  json j;
  j["map"] = {{"width", cfg.map.width},
              {"height", cfg.map.height},
              {"resolution", cfg.map.resolution},
              {"categories", cfg.map.categories}};
  j["sensor"] = {{"fov_deg", cfg.sensor.fov_deg},
                 {"ray_count", cfg.sensor.ray_count},
                 {"max_range", cfg.sensor.max_range}};
  j["scene_gen"] = {{"width", cfg.scene_gen.width},
                    {"height", cfg.scene_gen.height},
                    {"resolution", cfg.scene_gen.resolution},
                    {"room_count_min", cfg.scene_gen.room_count_min},
                    {"room_count_max", cfg.scene_gen.room_count_max},
                    {"room_size_min", cfg.scene_gen.room_size_min},
                    {"room_size_max", cfg.scene_gen.room_size_max},
                    {"corridor_width", cfg.scene_gen.corridor_width},
                    {"objects_per_category", cfg.scene_gen.objects_per_category},
                    {"decoy_count", cfg.scene_gen.decoy_count},
                    {"dead_end_count", cfg.scene_gen.dead_end_count},
                    {"dead_end_width", cfg.scene_gen.dead_end_width},
                    {"dead_end_length_min", cfg.scene_gen.dead_end_length_min},
                    {"dead_end_length_max", cfg.scene_gen.dead_end_length_max},
                    {"spawn_count", cfg.scene_gen.spawn_count},
                    {"category_count", cfg.scene_gen.category_count},
                    {"max_attempts", cfg.scene_gen.max_attempts}};
  j["frontier"] = {{"dilation_radius", cfg.frontier.dilation_radius},
                   {"min_region_size", cfg.frontier.min_region_size},
                   {"lambda_cu", cfg.frontier.lambda_cu},
                   {"utility_radius", cfg.frontier.utility_radius},
                   {"object_radius", cfg.frontier.object_radius}};
  j["planner"] = {{"dilation_radius", cfg.planner.dilation_radius},
                  {"heading_tolerance_deg", cfg.planner.heading_tolerance_deg},
                  {"goal_snap_radius", cfg.planner.goal_snap_radius},
                  {"recompute_each_step", cfg.planner.recompute_each_step}};
  j["helpers"] = {{"dormant_threshold", cfg.helpers.dormant_threshold},
                  {"sleep_time", cfg.helpers.sleep_time},
                  {"detection_threshold", cfg.helpers.detection_threshold},
                  {"k_stuck", cfg.helpers.k_stuck},
                  {"sleep_counts_cycles", cfg.helpers.sleep_counts_cycles}};
  j["policy"] = {{"goal_cadence", cfg.policy.goal_cadence},
                 {"stop_radius_factor", cfg.policy.stop_radius_factor}};
  j["toggles"] = {{"collision", cfg.toggles.collision},
                  {"exploration", cfg.toggles.exploration},
                  {"detection", cfg.toggles.detection}};
  j["verifier"] = {{"epsilon_fp", cfg.verifier.epsilon_fp},
                   {"epsilon_fn", cfg.verifier.epsilon_fn},
                   {"seed", cfg.verifier.seed}};
  j["advisors"] = {{"prior_path", cfg.prior_path},
                   {"floor", cfg.prior_floor},
                   {"aggregation", cfg.prior_aggregation == PriorAggregation::Max
                                       ? "max"
                                       : "noisy_or"}};
  j["run"] = {{"master_seed", cfg.master_seed},
              {"workers", cfg.workers},
              {"scenes_dir", cfg.scenes_dir},
              {"episodes", cfg.episodes_path},
              {"save_traces", cfg.save_traces},
              {"max_steps", cfg.max_steps},
              {"success_radius", cfg.success_radius}};
  return j.dump(2);
}

std::uint64_t configHash(const RunConfig& cfg) {
  const std::string text = configToJson(cfg);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

PolicyConfig policyConfig(const RunConfig& cfg) {
  PolicyConfig pc;
  pc.frontier = cfg.frontier;
  pc.helpers = cfg.helpers;
  pc.planner = cfg.planner;
  pc.policy = cfg.policy;
  pc.toggles = cfg.toggles;
  return pc;
}

CooccurrencePrior makeScorer(const RunConfig& cfg) {
  CooccurrencePrior prior = cfg.prior_path.empty()
                                ? CooccurrencePrior::defaults()
                                : CooccurrencePrior::load(cfg.prior_path);
  if (cfg.prior_path.empty()) prior.setFloor(cfg.prior_floor);
  prior.setAggregation(cfg.prior_aggregation);
  return prior;
}

}  // namespace objnav
