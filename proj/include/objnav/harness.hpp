#pragma once

#include "objnav/config.hpp"
#include "objnav/metrics.hpp"
#include "objnav/policy.hpp"
#include "objnav/scene.hpp"

#include <map>
#include <string>
#include <vector>

namespace objnav {

struct SuiteResult {
  std::vector<EpisodeResult> results;
  Metrics metrics;
  int collision_failures = 0;
  int exploration_failures = 0;
  int detection_failures = 0;
  int invalid = 0;
};

using SceneLibrary = std::map<std::string, Scene>;

/// One full episode: shortest-path oracle, policy rollout, metric fields and
/// failure classification. `trace_out`, when given, receives the step trace.
EpisodeResult runEpisode(const Scene& scene, const Episode& episode,
                         int episode_index, const RunConfig& cfg,
                         const FrontierScorer& scorer,
                         const TargetVerifier* verifier,
                         std::vector<StepRecord>* trace_out = nullptr);

/// Runs every episode against the library, in parallel across workers.
/// Results are deterministic for a fixed config regardless of worker count.
/// Per-episode errors mark the episode invalid instead of aborting the
/// suite. `traces_out`, when given, is filled per episode index.
SuiteResult runSuite(const RunConfig& cfg, const SceneLibrary& scenes,
                     const std::vector<Episode>& episodes,
                     std::vector<std::vector<StepRecord>>* traces_out = nullptr);

struct AblationRow {
  std::string name;
  HelperToggles toggles;
  SuiteResult suite;
};

/// Table II-shaped matrix: no helper, each helper alone, all three.
std::vector<AblationRow> runAblation(const RunConfig& cfg,
                                     const SceneLibrary& scenes,
                                     const std::vector<Episode>& episodes);

/// Scene + episode dataset generation for `count` scenes with
/// `episodes_per_scene` episodes each. Episode seeds derive from
/// (master_seed, index); start headings are multiples of 30 degrees.
struct GeneratedDataset {
  std::vector<Scene> scenes;
  std::vector<Episode> episodes;
};
GeneratedDataset generateDataset(const RunConfig& cfg, int scene_count,
                                 int episodes_per_scene);

SceneLibrary loadSceneDir(const std::string& dir);

// --- persistence ---

std::string traceToJsonLines(const std::vector<StepRecord>& trace);
std::string resultsToJsonLines(const SuiteResult& suite,
                               std::uint64_t config_hash);
std::string summaryCsv(const SuiteResult& suite);
std::string ablationCsv(const std::vector<AblationRow>& rows);
std::string ablationTable(const std::vector<AblationRow>& rows);

/// Writes results.jsonl, summary.csv, metrics.json and config.json into
/// `outdir` (created if missing); traces too when cfg.save_traces is set.
void writeSuiteOutputs(const std::string& outdir, const SuiteResult& suite,
                       const RunConfig& cfg,
                       const std::vector<std::vector<StepRecord>>* traces);

}  // namespace objnav
