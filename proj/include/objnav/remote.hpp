#pragma once

#include "objnav/advisors.hpp"

#include <memory>
#include <string>
#include <vector>

namespace objnav {

/// HTTP client speaking the advisor wire protocol:
///   POST /score  {"objects": ["chair", ...], "target": "bed"} -> {"p": 0.7}
///   POST /verify {"target": "bed", "evidence": {...}} -> {"answer": "yes"}
/// Category indices are translated through the supplied name list. One
/// request is in flight per client instance; give each worker its own.
class RemoteAdvisorClient : public FrontierScorer, public TargetVerifier {
 public:
  RemoteAdvisorClient(std::string host, int port,
                      std::vector<std::string> category_names);
  ~RemoteAdvisorClient() override;

  double score(std::span<const int> nearby_objects, int target) const override;
  bool verify(const VerifyEvidence& evidence, int target) const override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Reference server wrapping local advisors behind the same protocol.
/// Binds to an ephemeral port on `host` and serves until stop().
class AdvisorServer {
 public:
  AdvisorServer(const FrontierScorer& scorer, const TargetVerifier& verifier,
                std::vector<std::string> category_names,
                const std::string& host = "127.0.0.1");
  ~AdvisorServer();

  int port() const;
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace objnav
