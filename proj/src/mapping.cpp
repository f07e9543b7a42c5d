#include "objnav/mapping.hpp"

#include <json.hpp>

#include <fstream>
#include <stdexcept>

namespace objnav {

using nlohmann::json;

void SemanticMap::reset(const MapConfig& cfg, const Vec2& origin_world) {
  if (cfg.width % 2 != 0 || cfg.height % 2 != 0)
    throw std::invalid_argument("map dimensions must be even");
  cfg_ = cfg;
  origin_world_ = origin_world;
  channels_.assign(std::size_t(channelCount()),
                   MaskGrid::Zero(cfg.width, cfg.height));
  agent_cell_ = {cfg.width / 2, cfg.height / 2};
  channels_[kAgent](agent_cell_.x, agent_cell_.y) = 1;
  clipped_rays_ = 0;
  explored_count_ = 0;
  obstacle_version_ = 0;
  touched_ = {};
  touched_.expandTo(agent_cell_);
}

Cell SemanticMap::worldToCell(const Vec2& p) const {
  const Vec2 rel = (p - origin_world_) / cfg_.resolution;
  return {cfg_.width / 2 + int(std::floor(rel.x())),
          cfg_.height / 2 + int(std::floor(rel.y()))};
}

Vec2 SemanticMap::cellToWorld(Cell c) const {
  if (!contains(c)) throw std::out_of_range("cellToWorld: cell outside map");
  return origin_world_ +
         Vec2((c.x - cfg_.width / 2 + 0.5) * cfg_.resolution,
              (c.y - cfg_.height / 2 + 0.5) * cfg_.resolution);
}

void SemanticMap::setExplored(Cell c) {
  auto& explored = channels_[kExplored];
  if (!explored(c.x, c.y)) {
    explored(c.x, c.y) = 1;
    ++explored_count_;
    touched_.expandTo(c);
  }
}

void SemanticMap::setObstacle(Cell c, int label) {
  setExplored(c);
  auto& obstacle = channels_[kObstacle];
  if (!obstacle(c.x, c.y)) {
    obstacle(c.x, c.y) = 1;
    ++obstacle_version_;
  }
  if (label >= 0 && label < cfg_.categories) {
    // Masked false targets stay masked; everything else accumulates.
    if (!channels_[std::size_t(falseTargetChannel())](c.x, c.y))
      channels_[std::size_t(objectChannel(label))](c.x, c.y) = 1;
  }
}

Cell SemanticMap::rayHitCell(const Pose& pose, const Ray& ray) const {
  // Push slightly past the hit boundary so the marked cell lies inside the
  // obstacle rather than on the free side of the edge.
  const Vec2 dir = headingVector(normalizeHeading(pose.heading + ray.bearing));
  const Vec2 p =
      pose.position() + dir * (ray.hit_distance + cfg_.resolution * 0.25);
  return worldToCell(p);
}

void SemanticMap::integrate(const Pose& pose, const Observation& obs) {
  const Cell pose_cell = worldToCell(pose.position());
  if (!contains(pose_cell))
    throw std::out_of_range("integrate: pose outside map");

  // Advance agent-location channels.
  if (pose_cell != agent_cell_) {
    channels_[kAgent](agent_cell_.x, agent_cell_.y) = 0;
    channels_[kVisited](agent_cell_.x, agent_cell_.y) = 1;
    agent_cell_ = pose_cell;
    channels_[kAgent](agent_cell_.x, agent_cell_.y) = 1;
    touched_.expandTo(agent_cell_);
  }
  setExplored(pose_cell);

  const Vec2 origin_cells =
      (pose.position() - origin_world_) / cfg_.resolution +
      Vec2(cfg_.width / 2.0, cfg_.height / 2.0);
  for (const Ray& ray : obs.rays) {
    const Vec2 dir = headingVector(normalizeHeading(pose.heading + ray.bearing));
    const Vec2 end_cells =
        origin_cells + dir * (ray.hit_distance / cfg_.resolution);
    walkRay(origin_cells, end_cells, cfg_.width, cfg_.height,
            [&](Cell c, double) {
              setExplored(c);
              return true;
            },
            &clipped_rays_);
    if (ray.hit && ray.hit_is_obstacle) {
      const Cell hit = rayHitCell(pose, ray);
      if (contains(hit))
        setObstacle(hit, ray.hit_label);
      else
        ++clipped_rays_;
    }
  }
}

void SemanticMap::markFalseTarget(std::span<const Cell> cells) {
  auto& ft = channels_[std::size_t(falseTargetChannel())];
  for (const Cell& c : cells) {
    if (!contains(c)) throw std::out_of_range("markFalseTarget: cell outside map");
    ft(c.x, c.y) = 1;
    for (int k = 0; k < cfg_.categories; ++k)
      channels_[std::size_t(objectChannel(k))](c.x, c.y) = 0;
    touched_.expandTo(c);
  }
}

void SemanticMap::saveSnapshot(const std::string& path) const {
  json header;
  header["format"] = "objnav-map";
  header["version"] = 1;
  header["width"] = cfg_.width;
  header["height"] = cfg_.height;
  header["resolution"] = cfg_.resolution;
  header["categories"] = cfg_.categories;
  header["origin"] = {origin_world_.x(), origin_world_.y()};
  header["agent_cell"] = {agent_cell_.x, agent_cell_.y};
  json names = json::array();
  names.push_back("obstacle");
  names.push_back("explored");
  names.push_back("agent");
  names.push_back("visited");
  for (int k = 0; k < cfg_.categories; ++k) names.push_back("object_" + std::to_string(k));
  names.push_back("false_target");
  header["channels"] = names;

  const std::string htext = header.dump();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  const std::uint32_t hlen = std::uint32_t(htext.size());
  out.write("SMAP", 4);
  out.write(reinterpret_cast<const char*>(&hlen), 4);
  out.write(htext.data(), std::streamsize(htext.size()));
  // Channel-major, then row-major (index = y*width + x) per channel.
  std::vector<char> buf(std::size_t(cfg_.width) * std::size_t(cfg_.height));
  for (const MaskGrid& ch : channels_) {
    for (int y = 0; y < cfg_.height; ++y)
      for (int x = 0; x < cfg_.width; ++x)
        buf[std::size_t(y) * std::size_t(cfg_.width) + std::size_t(x)] =
            char(ch(x, y));
    out.write(buf.data(), std::streamsize(buf.size()));
  }
}

SemanticMap SemanticMap::loadSnapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::string(magic, 4) != "SMAP")
    throw std::runtime_error("not a map snapshot");
  std::uint32_t hlen = 0;
  in.read(reinterpret_cast<char*>(&hlen), 4);
  std::string htext(hlen, '\0');
  in.read(htext.data(), std::streamsize(hlen));
  const json header = json::parse(htext);

  MapConfig cfg;
  cfg.width = header.at("width").get<int>();
  cfg.height = header.at("height").get<int>();
  cfg.resolution = header.at("resolution").get<double>();
  cfg.categories = header.at("categories").get<int>();
  SemanticMap map;
  map.reset(cfg, Vec2(header.at("origin")[0].get<double>(),
                      header.at("origin")[1].get<double>()));

  std::vector<char> buf(std::size_t(cfg.width) * std::size_t(cfg.height));
  for (MaskGrid& ch : map.channels_) {
    in.read(buf.data(), std::streamsize(buf.size()));
    if (!in) throw std::runtime_error("truncated map snapshot");
    for (int y = 0; y < cfg.height; ++y)
      for (int x = 0; x < cfg.width; ++x)
        ch(x, y) = std::uint8_t(
            buf[std::size_t(y) * std::size_t(cfg.width) + std::size_t(x)]);
  }
  // Restore derived state.
  map.channels_[kAgent].setZero();
  map.agent_cell_ = {header.at("agent_cell")[0].get<int>(),
                     header.at("agent_cell")[1].get<int>()};
  map.channels_[kAgent](map.agent_cell_.x, map.agent_cell_.y) = 1;
  map.explored_count_ = long(map.channels_[kExplored].cast<std::int64_t>().sum());
  map.touched_ = {};
  for (int x = 0; x < cfg.width; ++x)
    for (int y = 0; y < cfg.height; ++y)
      if (map.channels_[kExplored](x, y) || map.channels_[kObstacle](x, y))
        map.touched_.expandTo({x, y});
  map.touched_.expandTo(map.agent_cell_);
  return map;
}

}  // namespace objnav
