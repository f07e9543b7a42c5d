#include "objnav/advisors.hpp"

#include "objnav/scene.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace objnav {

using nlohmann::json;

CooccurrencePrior::CooccurrencePrior(Eigen::MatrixXd matrix,
                                     std::vector<std::string> names,
                                     double floor, PriorAggregation agg)
    : matrix_(std::move(matrix)), names_(std::move(names)), floor_(floor),
      agg_(agg) {
  if (matrix_.rows() != matrix_.cols())
    throw std::invalid_argument("prior matrix must be square");
  if (int(names_.size()) != matrix_.rows())
    throw std::invalid_argument("prior names must match matrix size");
  for (int i = 0; i < matrix_.rows(); ++i) {
    for (int j = 0; j < matrix_.cols(); ++j) {
      const double v = matrix_(i, j);
      if (v < 0.0 || v > 1.0)
        throw std::invalid_argument("prior entries must lie in [0, 1]");
    }
    if (matrix_(i, i) != 1.0)
      throw std::invalid_argument("prior diagonal must be 1");
  }
}

CooccurrencePrior CooccurrencePrior::defaults() {
  // Rows/cols follow defaultCategoryNames():
  // chair, couch, potted_plant, bed, toilet, tv_monitor.
  Eigen::MatrixXd m(6, 6);
  m << 1.00, 0.85, 0.55, 0.35, 0.10, 0.70,
       0.85, 1.00, 0.60, 0.25, 0.08, 0.80,
       0.55, 0.60, 1.00, 0.30, 0.15, 0.45,
       0.35, 0.25, 0.30, 1.00, 0.40, 0.30,
       0.10, 0.08, 0.15, 0.40, 1.00, 0.05,
       0.70, 0.80, 0.45, 0.30, 0.05, 1.00;
  return CooccurrencePrior(m, defaultCategoryNames());
}

CooccurrencePrior CooccurrencePrior::fromJson(const std::string& text) {
  const json j = json::parse(text);
  std::vector<std::string> names;
  for (const auto& n : j.at("categories")) names.push_back(n.get<std::string>());
  const auto& rows = j.at("matrix");
  const int n = int(names.size());
  Eigen::MatrixXd m(n, n);
  if (int(rows.size()) != n)
    throw std::invalid_argument("prior matrix row count mismatch");
  for (int i = 0; i < n; ++i) {
    if (int(rows[std::size_t(i)].size()) != n)
      throw std::invalid_argument("prior matrix column count mismatch");
    for (int k = 0; k < n; ++k)
      m(i, k) = rows[std::size_t(i)][std::size_t(k)].get<double>();
  }
  const double floor = j.value("floor", 0.05);
  return CooccurrencePrior(m, std::move(names), floor);
}

CooccurrencePrior CooccurrencePrior::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read prior table " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return fromJson(ss.str());
}

std::string CooccurrencePrior::toJson() const {
  json j;
  j["categories"] = names_;
  json rows = json::array();
  for (int i = 0; i < matrix_.rows(); ++i) {
    json row = json::array();
    for (int k = 0; k < matrix_.cols(); ++k) row.push_back(matrix_(i, k));
    rows.push_back(row);
  }
  j["matrix"] = rows;
  j["floor"] = floor_;
  return j.dump(2);
}

double CooccurrencePrior::score(std::span<const int> nearby_objects,
                                int target) const {
  if (target < 0 || target >= categories())
    throw std::out_of_range("prior: target category out of range");
  if (nearby_objects.empty()) return floor_;
  if (agg_ == PriorAggregation::Max) {
    double best = 0.0;
    for (int obj : nearby_objects) best = std::max(best, matrix_(obj, target));
    return best;
  }
  double miss = 1.0;
  for (int obj : nearby_objects) miss *= 1.0 - matrix_(obj, target);
  return 1.0 - miss;
}

bool StochasticVerifier::verify(const VerifyEvidence& evidence,
                                int /*target*/) const {
  Rng rng(hashCombine(hashCombine(cfg_.seed, evidence.episode_id),
                      std::uint64_t(evidence.detection_index)));
  const double u = rng.uniform();
  if (evidence.truly_target) return u >= cfg_.epsilon_fn;
  return u < cfg_.epsilon_fp;
}

std::optional<std::size_t> selectFrontier(std::span<const double> scores,
                                          std::span<const double> costs) {
  if (scores.empty()) return std::nullopt;
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i] > scores[best]) {
      best = i;
    } else if (scores[i] == scores[best] && i < costs.size() &&
               best < costs.size() && costs[i] < costs[best]) {
      best = i;
    }
  }
  return best;
}

}  // namespace objnav
