#pragma once

#include "objnav/types.hpp"

#include <Eigen/Core>

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace objnav {

/// Scores how promising a frontier is for a target, from the object
/// categories observed near it. Stands in for the language-model ranking.
class FrontierScorer {
 public:
  virtual ~FrontierScorer() = default;
  virtual double score(std::span<const int> nearby_objects, int target) const = 0;
};

/// What the verifier gets to look at for one detection. The ground-truth
/// flag substitutes for pixel evidence; the cells identify the detection.
struct VerifyEvidence {
  bool truly_target = false;
  std::vector<Cell> cells;
  std::uint64_t episode_id = 0;
  int detection_index = 0;
};

/// Binary yes/no check of a reported target detection. Stands in for the
/// vision-language double check.
class TargetVerifier {
 public:
  virtual ~TargetVerifier() = default;
  virtual bool verify(const VerifyEvidence& evidence, int target) const = 0;
};

enum class PriorAggregation : std::uint8_t { Max, NoisyOr };

/// Pairwise co-occurrence affinities between object categories, in [0, 1]
/// with unit diagonal. Frontier score is the max (or noisy-OR) of the
/// affinities between the target and each object seen near the frontier;
/// an empty neighborhood falls back to `floor`.
class CooccurrencePrior : public FrontierScorer {
 public:
  CooccurrencePrior(Eigen::MatrixXd matrix, std::vector<std::string> names,
                    double floor = 0.05,
                    PriorAggregation agg = PriorAggregation::Max);

  /// Table used when no prior file is configured.
  static CooccurrencePrior defaults();
  static CooccurrencePrior fromJson(const std::string& text);
  static CooccurrencePrior load(const std::string& path);
  std::string toJson() const;

  double score(std::span<const int> nearby_objects, int target) const override;

  double at(int object, int target) const { return matrix_(object, target); }
  int categories() const { return int(matrix_.rows()); }
  const std::vector<std::string>& names() const { return names_; }
  double floorValue() const { return floor_; }
  void setFloor(double floor) { floor_ = floor; }
  void setAggregation(PriorAggregation agg) { agg_ = agg; }

 private:
  Eigen::MatrixXd matrix_;
  std::vector<std::string> names_;
  double floor_;
  PriorAggregation agg_;
};

struct VerifierConfig {
  double epsilon_fp = 0.0;  // P(yes | not target)
  double epsilon_fn = 0.0;  // P(no | target)
  std::uint64_t seed = 0;
};

/// Confusion-rate oracle: returns the ground truth, flipped with the
/// configured rates. The flip draw is a pure function of
/// (seed, episode id, detection index), so replays are exact.
class StochasticVerifier : public TargetVerifier {
 public:
  explicit StochasticVerifier(const VerifierConfig& cfg) : cfg_(cfg) {}
  bool verify(const VerifyEvidence& evidence, int target) const override;

 private:
  VerifierConfig cfg_;
};

/// Index of the best-scoring frontier. Ties prefer the smaller geodesic
/// cost, then the lower index. Empty input returns nullopt (no-frontier
/// signal; the policy falls back).
std::optional<std::size_t> selectFrontier(std::span<const double> scores,
                                          std::span<const double> costs);

}  // namespace objnav
