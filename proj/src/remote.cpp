#include "objnav/remote.hpp"

#include <httplib.h>
#include <json.hpp>

#include <stdexcept>
#include <thread>

namespace objnav {

using nlohmann::json;

namespace {

int nameToIndex(const std::vector<std::string>& names, const std::string& n) {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == n) return int(i);
  throw std::runtime_error("unknown category name: " + n);
}

}  // namespace

struct RemoteAdvisorClient::Impl {
  mutable httplib::Client client;
  std::vector<std::string> names;

  Impl(const std::string& host, int port, std::vector<std::string> names_in)
      : client(host, port), names(std::move(names_in)) {
    client.set_connection_timeout(5);
    client.set_read_timeout(10);
  }
};

RemoteAdvisorClient::RemoteAdvisorClient(std::string host, int port,
                                         std::vector<std::string> names)
    : impl_(std::make_unique<Impl>(host, port, std::move(names))) {}

RemoteAdvisorClient::~RemoteAdvisorClient() = default;

double RemoteAdvisorClient::score(std::span<const int> nearby_objects,
                                  int target) const {
  json body;
  json objects = json::array();
  for (int obj : nearby_objects) objects.push_back(impl_->names.at(std::size_t(obj)));
  body["objects"] = objects;
  body["target"] = impl_->names.at(std::size_t(target));
  const auto res = impl_->client.Post("/score", body.dump(), "application/json");
  if (!res || res->status != 200)
    throw std::runtime_error("remote advisor /score failed");
  return json::parse(res->body).at("p").get<double>();
}

bool RemoteAdvisorClient::verify(const VerifyEvidence& evidence,
                                 int target) const {
  json body;
  body["target"] = impl_->names.at(std::size_t(target));
  json cells = json::array();
  for (const Cell& c : evidence.cells) cells.push_back({c.x, c.y});
  body["evidence"] = {{"truly_target", evidence.truly_target},
                      {"cells", cells},
                      {"episode", evidence.episode_id},
                      {"detection_index", evidence.detection_index}};
  const auto res = impl_->client.Post("/verify", body.dump(), "application/json");
  if (!res || res->status != 200)
    throw std::runtime_error("remote advisor /verify failed");
  const std::string answer = json::parse(res->body).at("answer").get<std::string>();
  return answer == "yes";
}

struct AdvisorServer::Impl {
  httplib::Server server;
  std::thread thread;
  int port = 0;
};

AdvisorServer::AdvisorServer(const FrontierScorer& scorer,
                             const TargetVerifier& verifier,
                             std::vector<std::string> names,
                             const std::string& host)
    : impl_(std::make_unique<Impl>()) {
  auto names_copy = std::move(names);
  impl_->server.Post(
      "/score",
      [&scorer, names_copy](const httplib::Request& req, httplib::Response& res) {
        try {
          const json body = json::parse(req.body);
          std::vector<int> objects;
          for (const auto& n : body.at("objects"))
            objects.push_back(nameToIndex(names_copy, n.get<std::string>()));
          const int target = nameToIndex(names_copy, body.at("target").get<std::string>());
          const double p = scorer.score(objects, target);
          res.set_content(json{{"p", p}}.dump(), "application/json");
        } catch (const std::exception& e) {
          res.status = 400;
          res.set_content(json{{"error", e.what()}}.dump(), "application/json");
        }
      });
  impl_->server.Post(
      "/verify",
      [&verifier, names_copy](const httplib::Request& req, httplib::Response& res) {
        try {
          const json body = json::parse(req.body);
          const int target = nameToIndex(names_copy, body.at("target").get<std::string>());
          const json& je = body.at("evidence");
          VerifyEvidence ev;
          ev.truly_target = je.at("truly_target").get<bool>();
          ev.episode_id = je.value("episode", std::uint64_t(0));
          ev.detection_index = je.value("detection_index", 0);
          for (const auto& jc : je.value("cells", json::array()))
            ev.cells.push_back({jc.at(0).get<int>(), jc.at(1).get<int>()});
          const bool yes = verifier.verify(ev, target);
          res.set_content(json{{"answer", yes ? "yes" : "no"}}.dump(),
                          "application/json");
        } catch (const std::exception& e) {
          res.status = 400;
          res.set_content(json{{"error", e.what()}}.dump(), "application/json");
        }
      });

  impl_->port = impl_->server.bind_to_any_port(host);
  if (impl_->port <= 0) throw std::runtime_error("advisor server: bind failed");
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
}

AdvisorServer::~AdvisorServer() { stop(); }

int AdvisorServer::port() const { return impl_->port; }

void AdvisorServer::stop() {
  if (impl_->thread.joinable()) {
    impl_->server.stop();
    impl_->thread.join();
  }
}

}  // namespace objnav
