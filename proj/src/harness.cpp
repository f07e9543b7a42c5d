#include "objnav/harness.hpp"

#include <json.hpp>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>

namespace objnav {

using nlohmann::json;
namespace fs = std::filesystem;

EpisodeResult runEpisode(const Scene& scene, const Episode& episode,
                         int episode_index, const RunConfig& cfg,
                         const FrontierScorer& scorer,
                         const TargetVerifier* verifier,
                         std::vector<StepRecord>* trace_out) {
  EpisodeResult result;
  result.scene_id = episode.scene_id;
  result.episode_index = episode_index;
  result.target = episode.target;

  const auto shortest =
      shortestPathLength(scene, episode.start, episode.target,
                         episode.success_radius);
  if (!shortest) {
    result.valid = false;
    result.invalid_reason = "target unreachable from start";
    return result;
  }
  result.shortest_length = *shortest;

  PolicyRunner runner(scene, episode, policyConfig(cfg), cfg.map, cfg.sensor,
                      scorer, verifier);
  const auto& trace = runner.run();

  result.success = runner.success();
  result.stopped = runner.stopped();
  result.path_length = runner.pathLength();
  result.steps = int(trace.size());

  double best = kInfinity;
  for (const ObjectInstance* inst : scene.targetInstances(episode.target))
    for (const Cell& c : inst->cells)
      best = std::min(best,
                      (scene.cellCenter(c) - runner.pose().position()).norm());
  result.final_distance = std::isfinite(best) ? best : 0.0;

  if (!result.success)
    result.failure = classifyFailure(trace, result, runner.state().mode);
  if (trace_out) *trace_out = trace;
  return result;
}

SuiteResult runSuite(const RunConfig& cfg, const SceneLibrary& scenes,
                     const std::vector<Episode>& episodes,
                     std::vector<std::vector<StepRecord>>* traces_out) {
  SuiteResult suite;
  suite.results.resize(episodes.size());
  if (traces_out) traces_out->assign(episodes.size(), {});

  const CooccurrencePrior scorer = makeScorer(cfg);
  const StochasticVerifier verifier(cfg.verifier);

  int workers = cfg.workers > 0 ? cfg.workers
                                : int(std::thread::hardware_concurrency());
  workers = std::max(1, std::min<int>(workers, int(episodes.size())));

  std::atomic<std::size_t> next{0};
  const auto work = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= episodes.size()) return;
      const Episode& ep = episodes[i];
      EpisodeResult& slot = suite.results[i];
      const auto it = scenes.find(ep.scene_id);
      if (it == scenes.end()) {
        slot.scene_id = ep.scene_id;
        slot.episode_index = int(i);
        slot.valid = false;
        slot.invalid_reason = "scene not found";
        continue;
      }
      try {
        slot = runEpisode(it->second, ep, int(i), cfg, scorer, &verifier,
                          traces_out ? &(*traces_out)[i] : nullptr);
      } catch (const std::exception& e) {
        slot = EpisodeResult{};
        slot.scene_id = ep.scene_id;
        slot.episode_index = int(i);
        slot.valid = false;
        slot.invalid_reason = std::string("episode error: ") + e.what();
      }
    }
  };

  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int k = 0; k < workers; ++k) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  for (const EpisodeResult& r : suite.results) {
    if (!r.valid) {
      ++suite.invalid;
      continue;
    }
    if (r.failure) {
      switch (*r.failure) {
        case FailureClass::Collision: ++suite.collision_failures; break;
        case FailureClass::Exploration: ++suite.exploration_failures; break;
        case FailureClass::Detection: ++suite.detection_failures; break;
      }
    }
  }
  suite.metrics = computeMetrics(suite.results, cfg.success_radius);
  return suite;
}

std::vector<AblationRow> runAblation(const RunConfig& cfg,
                                     const SceneLibrary& scenes,
                                     const std::vector<Episode>& episodes) {
  const std::vector<std::pair<std::string, HelperToggles>> rows = {
      {"no_helper", {false, false, false}},
      {"collision", {true, false, false}},
      {"exploration", {false, true, false}},
      {"detection", {false, false, true}},
      {"all_helpers", {true, true, true}},
  };
  std::vector<AblationRow> out;
  for (const auto& [name, toggles] : rows) {
    RunConfig row_cfg = cfg;
    row_cfg.toggles = toggles;
    out.push_back({name, toggles, runSuite(row_cfg, scenes, episodes)});
  }
  return out;
}

GeneratedDataset generateDataset(const RunConfig& cfg, int scene_count,
                                 int episodes_per_scene) {
  GeneratedDataset out;
  Rng rng(cfg.master_seed);
  for (int s = 0; s < scene_count; ++s) {
    SceneGenParams params = cfg.scene_gen;
    Scene scene = generateScene(hashCombine(cfg.master_seed, std::uint64_t(s)),
                                params);
    std::ostringstream id;
    id << "scene_" << std::setw(4) << std::setfill('0') << s;
    scene.id = id.str();

    Rng ep_rng = rng.child(std::uint64_t(s) + 1);
    for (int e = 0; e < episodes_per_scene; ++e) {
      // Target must exist in the scene as a real instance.
      std::vector<int> present;
      for (int c = 0; c < scene.category_count; ++c)
        if (!scene.targetInstances(c).empty()) present.push_back(c);
      if (present.empty()) break;
      Episode ep;
      ep.scene_id = scene.id;
      ep.target = present[std::size_t(ep_rng.uniformInt(0, int(present.size()) - 1))];
      const Cell spawn = scene.spawn_points[std::size_t(
          ep_rng.uniformInt(0, int(scene.spawn_points.size()) - 1))];
      const Vec2 w = scene.cellCenter(spawn);
      ep.start = {w.x(), w.y(), double(30 * ep_rng.uniformInt(0, 11))};
      ep.seed = hashCombine(cfg.master_seed,
                            std::uint64_t(out.episodes.size()) + 0x9E37ULL);
      ep.max_steps = cfg.max_steps;
      ep.success_radius = cfg.success_radius;
      out.episodes.push_back(ep);
    }
    out.scenes.push_back(std::move(scene));
  }
  return out;
}

SceneLibrary loadSceneDir(const std::string& dir) {
  SceneLibrary out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() != ".json") continue;
    Scene scene = loadScene(entry.path().string());
    out.emplace(scene.id, std::move(scene));
  }
  return out;
}

// --- persistence ---

namespace {

json cellJson(const Cell& c) { return json::array({c.x, c.y}); }

json recordJson(const StepRecord& rec) {
  json j;
  j["step"] = rec.step;
  j["pose"] = {{"x", rec.pose.x}, {"y", rec.pose.y}, {"heading", rec.pose.heading}};
  j["action"] = toString(rec.action);
  j["mode"] = toString(rec.mode);
  if (rec.goal) j["goal"] = cellJson(*rec.goal);
  j["events"] = rec.events;
  j["sleep_counter"] = rec.sleep_counter;
  j["feasible"] = rec.feasible;
  j["displacement"] = rec.displacement;
  return j;
}

}  // namespace

std::string traceToJsonLines(const std::vector<StepRecord>& trace) {
  std::ostringstream out;
  for (const StepRecord& rec : trace) out << recordJson(rec).dump() << "\n";
  return out.str();
}

std::string resultsToJsonLines(const SuiteResult& suite,
                               std::uint64_t config_hash) {
  std::ostringstream out;
  for (const EpisodeResult& r : suite.results) {
    json j;
    j["episode"] = r.episode_index;
    j["scene"] = r.scene_id;
    j["target"] = r.target;
    j["valid"] = r.valid;
    if (!r.valid) {
      j["reason"] = r.invalid_reason;
    } else {
      j["success"] = r.success;
      j["shortest_length"] = r.shortest_length;
      j["path_length"] = r.path_length;
      j["final_distance"] = r.final_distance;
      j["steps"] = r.steps;
      j["stopped"] = r.stopped;
      if (r.failure) j["failure"] = toString(*r.failure);
    }
    j["config_hash"] = config_hash;
    out << j.dump() << "\n";
  }
  return out.str();
}

std::string summaryCsv(const SuiteResult& suite) {
  std::ostringstream out;
  out << "episodes,valid,sr,spl,dtg,collision_failures,exploration_failures,"
         "detection_failures\n";
  out << suite.results.size() << "," << suite.metrics.episodes << ","
      << std::setprecision(17) << suite.metrics.sr << "," << suite.metrics.spl
      << "," << suite.metrics.dtg << "," << suite.collision_failures << ","
      << suite.exploration_failures << "," << suite.detection_failures << "\n";
  return out.str();
}

std::string ablationCsv(const std::vector<AblationRow>& rows) {
  std::ostringstream out;
  out << "row,collision_failure_pct,exploration_failure_pct,"
         "detection_failure_pct,sr\n";
  for (const AblationRow& row : rows) {
    const double n = std::max(1, row.suite.metrics.episodes);
    out << row.name << "," << std::setprecision(17)
        << 100.0 * row.suite.collision_failures / n << ","
        << 100.0 * row.suite.exploration_failures / n << ","
        << 100.0 * row.suite.detection_failures / n << ","
        << row.suite.metrics.sr << "\n";
  }
  return out.str();
}

std::string ablationTable(const std::vector<AblationRow>& rows) {
  std::ostringstream out;
  out << std::left << std::setw(14) << "row" << std::right << std::setw(14)
      << "collision%" << std::setw(14) << "exploration%" << std::setw(14)
      << "detection%" << std::setw(10) << "SR" << "\n";
  for (const AblationRow& row : rows) {
    const double n = std::max(1, row.suite.metrics.episodes);
    out << std::left << std::setw(14) << row.name << std::right << std::fixed
        << std::setprecision(2) << std::setw(14)
        << 100.0 * row.suite.collision_failures / n << std::setw(14)
        << 100.0 * row.suite.exploration_failures / n << std::setw(14)
        << 100.0 * row.suite.detection_failures / n << std::setw(10)
        << std::setprecision(3) << row.suite.metrics.sr << "\n";
  }
  return out.str();
}

void writeSuiteOutputs(const std::string& outdir, const SuiteResult& suite,
                       const RunConfig& cfg,
                       const std::vector<std::vector<StepRecord>>* traces) {
  fs::create_directories(outdir);
  const std::uint64_t hash = configHash(cfg);
  {
    std::ofstream out(fs::path(outdir) / "results.jsonl", std::ios::binary);
    out << resultsToJsonLines(suite, hash);
  }
  {
    std::ofstream out(fs::path(outdir) / "summary.csv", std::ios::binary);
    out << summaryCsv(suite);
  }
  {
    json m;
    m["sr"] = suite.metrics.sr;
    m["spl"] = suite.metrics.spl;
    m["dtg"] = suite.metrics.dtg;
    m["episodes"] = suite.metrics.episodes;
    m["invalid"] = suite.invalid;
    m["config_hash"] = hash;
    std::ofstream out(fs::path(outdir) / "metrics.json", std::ios::binary);
    out << m.dump(2) << "\n";
  }
  {
    std::ofstream out(fs::path(outdir) / "config.json", std::ios::binary);
    out << configToJson(cfg) << "\n";
  }
  if (traces && cfg.save_traces) {
    const fs::path tdir = fs::path(outdir) / "traces";
    fs::create_directories(tdir);
    for (std::size_t i = 0; i < traces->size(); ++i) {
      std::ostringstream name;
      name << "episode_" << std::setw(5) << std::setfill('0') << i << ".jsonl";
      std::ofstream out(tdir / name.str(), std::ios::binary);
      out << traceToJsonLines((*traces)[i]);
    }
  }
}

}  // namespace objnav
