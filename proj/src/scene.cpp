#include "objnav/scene.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace objnav {

using nlohmann::json;

namespace {

struct Room {
  int x0, y0, x1, y1;  // inclusive free interior

  Cell center() const { return {(x0 + x1) / 2, (y0 + y1) / 2}; }
  bool intersects(const Room& o, int gap) const {
    return !(x1 + gap < o.x0 || o.x1 + gap < x0 || y1 + gap < o.y0 ||
             o.y1 + gap < y0);
  }
};

void carveRect(MaskGrid& occ, int x0, int y0, int x1, int y1) {
  for (int x = std::max(1, x0); x <= std::min(int(occ.rows()) - 2, x1); ++x)
    for (int y = std::max(1, y0); y <= std::min(int(occ.cols()) - 2, y1); ++y)
      occ(x, y) = 0;
}

// L-shaped corridor between two cells, carved `width` cells wide.
void carveCorridor(MaskGrid& occ, Cell a, Cell b, int width, Rng& rng) {
  const int r = width / 2;
  const bool x_first = rng.bernoulli(0.5);
  const Cell elbow = x_first ? Cell{b.x, a.y} : Cell{a.x, b.y};
  const auto leg = [&](Cell p, Cell q) {
    const int x0 = std::min(p.x, q.x), x1 = std::max(p.x, q.x);
    const int y0 = std::min(p.y, q.y), y1 = std::max(p.y, q.y);
    carveRect(occ, x0 - r, y0 - r, x1 + r, y1 + r);
  };
  leg(a, elbow);
  leg(elbow, b);
}

bool rectSolid(const MaskGrid& occ, int x0, int y0, int x1, int y1) {
  if (x0 < 1 || y0 < 1 || x1 > int(occ.rows()) - 2 || y1 > int(occ.cols()) - 2)
    return false;
  for (int x = x0; x <= x1; ++x)
    for (int y = y0; y <= y1; ++y)
      if (!occ(x, y)) return false;
  return true;
}

struct DeadEndSpec {
  std::vector<Cell> throat;
  std::vector<Cell> chamber;
};

// A narrow throat punched through a room wall into a carved chamber. The
// throat is kept below the planner's dilation clearance so the chamber is
// only reachable by threading it.
std::optional<DeadEndSpec> tryCarveDeadEnd(MaskGrid& occ, const Room& room,
                                           const SceneGenParams& p, Rng& rng) {
  const int w = int(occ.rows());
  const int h = int(occ.cols());
  const int tw = p.dead_end_width;
  const int tlen =
      rng.uniformInt(std::min(p.dead_end_length_min, p.dead_end_length_max),
                     std::max(p.dead_end_length_min, p.dead_end_length_max));
  const int chamber = std::max(tw + 4, 8);

  for (int attempt = 0; attempt < 12; ++attempt) {
    const int side = rng.uniformInt(0, 3);  // 0:+x 1:-x 2:+y 3:-y
    // Outward unit direction and a start cell on the room edge.
    int dx = 0, dy = 0;
    Cell start;
    if (side == 0) {
      dx = 1;
      start = {room.x1 + 1, rng.uniformInt(room.y0 + 1, room.y1 - tw)};
    } else if (side == 1) {
      dx = -1;
      start = {room.x0 - 1, rng.uniformInt(room.y0 + 1, room.y1 - tw)};
    } else if (side == 2) {
      dy = 1;
      start = {rng.uniformInt(room.x0 + 1, room.x1 - tw), room.y1 + 1};
    } else {
      dy = -1;
      start = {rng.uniformInt(room.x0 + 1, room.x1 - tw), room.y0 - 1};
    }

    // Bounding boxes for throat then chamber, in outward order.
    const auto box_at = [&](int along0, int along1, int across0,
                            int across1) -> std::array<int, 4> {
      if (dx != 0) {
        const int xa = dx > 0 ? start.x + along0 : start.x - along1;
        const int xb = dx > 0 ? start.x + along1 : start.x - along0;
        return {xa, across0, xb, across1};
      }
      const int ya = dy > 0 ? start.y + along0 : start.y - along1;
      const int yb = dy > 0 ? start.y + along1 : start.y - along0;
      return {across0, ya, across1, yb};
    };
    const int across0 = dx != 0 ? start.y : start.x;
    const int across1 = across0 + tw - 1;
    const auto tbox = box_at(0, tlen - 1, across0, across1);
    // Chamber centered on the throat axis.
    const int ccenter = (across0 + across1) / 2;
    const int c0 = ccenter - chamber / 2;
    const int c1 = c0 + chamber - 1;
    const auto cbox = box_at(tlen, tlen + chamber - 1, c0, c1);

    // Everything (plus a 1-cell shell) must be solid so the stub stays a
    // dead end instead of opening into other free space.
    if (!rectSolid(occ, std::min(tbox[0], cbox[0]) - 1,
                   std::min(tbox[1], cbox[1]) - 1,
                   std::max(tbox[2], cbox[2]) + 1,
                   std::max(tbox[3], cbox[3]) + 1))
      continue;
    (void)w;
    (void)h;

    DeadEndSpec spec;
    for (int x = tbox[0]; x <= tbox[2]; ++x)
      for (int y = tbox[1]; y <= tbox[3]; ++y) {
        occ(x, y) = 0;
        spec.throat.push_back({x, y});
      }
    for (int x = cbox[0]; x <= cbox[2]; ++x)
      for (int y = cbox[1]; y <= cbox[3]; ++y) {
        occ(x, y) = 0;
        spec.chamber.push_back({x, y});
      }
    return spec;
  }
  return std::nullopt;
}

// 2x2 object blob against a wall inside the given free region.
std::optional<std::vector<Cell>> tryPlaceBlob(const Scene& scene,
                                              const std::vector<Cell>& region,
                                              Rng& rng) {
  const auto& occ = scene.occupancy;
  for (int attempt = 0; attempt < 60; ++attempt) {
    const Cell base = region[std::size_t(rng.uniformInt(0, int(region.size()) - 1))];
    std::vector<Cell> blob = {base,
                              {base.x + 1, base.y},
                              {base.x, base.y + 1},
                              {base.x + 1, base.y + 1}};
    bool ok = true;
    bool against_wall = false;
    for (const Cell& c : blob) {
      if (!scene.isFree(c)) {
        ok = false;
        break;
      }
      // Reject cells already adjacent to another object.
      for (int dx = -1; dx <= 1 && ok; ++dx)
        for (int dy = -1; dy <= 1; ++dy) {
          const Cell n{c.x + dx, c.y + dy};
          if (inBounds(n, occ) && scene.instance_ids(n.x, n.y) >= 0) {
            ok = false;
            break;
          }
        }
      if (!ok) break;
      static constexpr int dx4[] = {1, -1, 0, 0};
      static constexpr int dy4[] = {0, 0, 1, -1};
      for (int k = 0; k < 4; ++k) {
        const Cell n{c.x + dx4[k], c.y + dy4[k]};
        if (inBounds(n, occ) && occ(n.x, n.y) &&
            scene.instance_ids(n.x, n.y) < 0)
          against_wall = true;
      }
    }
    if (ok && against_wall) return blob;
  }
  return std::nullopt;
}

void commitInstance(Scene& scene, int category, const std::vector<Cell>& cells,
                    bool decoy) {
  const int id = int(scene.instances.size());
  scene.instances.push_back({category, cells, decoy});
  for (const Cell& c : cells) {
    scene.occupancy(c.x, c.y) = 1;
    scene.semantics(c.x, c.y) = std::int16_t(category);
    scene.instance_ids(c.x, c.y) = id;
  }
}

Scene attemptGenerate(std::uint64_t seed, const SceneGenParams& p, Rng& rng) {
  Scene scene;
  scene.width = p.width;
  scene.height = p.height;
  scene.resolution = p.resolution;
  scene.category_count = p.category_count;
  scene.occupancy = MaskGrid::Constant(p.width, p.height, 1);
  scene.semantics =
      Grid<std::int16_t>::Constant(p.width, p.height, std::int16_t(kNoCategory));
  scene.instance_ids = Grid<std::int32_t>::Constant(p.width, p.height, -1);

  // Rooms: rejection-sampled rectangles with a solid gap between them.
  const int room_count = rng.uniformInt(p.room_count_min, p.room_count_max);
  std::vector<Room> rooms;
  for (int tries = 0; int(rooms.size()) < room_count && tries < 300; ++tries) {
    const int rw = rng.uniformInt(p.room_size_min, p.room_size_max);
    const int rh = rng.uniformInt(p.room_size_min, p.room_size_max);
    if (rw + 4 >= p.width || rh + 4 >= p.height) continue;
    const int x0 = rng.uniformInt(2, p.width - rw - 3);
    const int y0 = rng.uniformInt(2, p.height - rh - 3);
    Room r{x0, y0, x0 + rw - 1, y0 + rh - 1};
    bool clear = true;
    for (const Room& o : rooms)
      if (r.intersects(o, 3)) {
        clear = false;
        break;
      }
    if (clear) rooms.push_back(r);
  }
  if (rooms.empty()) throw SceneGenError("no room fits the requested sizes");

  for (const Room& r : rooms) carveRect(scene.occupancy, r.x0, r.y0, r.x1, r.y1);

  // Spanning connections: each room to its nearest already-connected room.
  for (std::size_t i = 1; i < rooms.size(); ++i) {
    std::size_t best = 0;
    double best_d = kInfinity;
    for (std::size_t j = 0; j < i; ++j) {
      const double d = cellDistance(rooms[i].center(), rooms[j].center());
      if (d < best_d) {
        best_d = d;
        best = j;
      }
    }
    carveCorridor(scene.occupancy, rooms[i].center(), rooms[best].center(),
                  p.corridor_width, rng);
  }

  std::vector<DeadEndSpec> dead_ends;
  for (int k = 0; k < p.dead_end_count; ++k) {
    const Room& room = rooms[std::size_t(rng.uniformInt(0, int(rooms.size()) - 1))];
    if (auto de = tryCarveDeadEnd(scene.occupancy, room, p, rng))
      dead_ends.push_back(std::move(*de));
  }

  // Objects against room walls, round-robin over categories.
  for (int c = 0; c < p.category_count; ++c) {
    for (int k = 0; k < p.objects_per_category; ++k) {
      const Room& room =
          rooms[std::size_t(rng.uniformInt(0, int(rooms.size()) - 1))];
      std::vector<Cell> region;
      for (int x = room.x0; x <= room.x1; ++x)
        for (int y = room.y0; y <= room.y1; ++y)
          if (scene.isFree({x, y})) region.push_back({x, y});
      if (region.empty()) continue;
      if (auto blob = tryPlaceBlob(scene, region, rng))
        commitInstance(scene, c, *blob, false);
    }
  }

  // Decoys in rooms; one extra bait decoy inside each dead-end chamber.
  for (int k = 0; k < p.decoy_count; ++k) {
    const Room& room =
        rooms[std::size_t(rng.uniformInt(0, int(rooms.size()) - 1))];
    std::vector<Cell> region;
    for (int x = room.x0; x <= room.x1; ++x)
      for (int y = room.y0; y <= room.y1; ++y)
        if (scene.isFree({x, y})) region.push_back({x, y});
    if (region.empty()) continue;
    if (auto blob = tryPlaceBlob(scene, region, rng))
      commitInstance(scene, rng.uniformInt(0, p.category_count - 1), *blob, true);
  }
  for (const DeadEndSpec& de : dead_ends) {
    std::vector<Cell> region;
    for (const Cell& c : de.chamber)
      if (scene.isFree(c)) region.push_back(c);
    if (region.empty()) continue;
    if (auto blob = tryPlaceBlob(scene, region, rng))
      commitInstance(scene, rng.uniformInt(0, p.category_count - 1), *blob, true);
  }

  // Spawn points: free cells with clearance, all inside one free component.
  MaskGrid free_mask = 1 - scene.occupancy;
  const MaskGrid near_obstacle = dilate(scene.occupancy, 2);
  std::vector<Cell> clear_cells;
  for (int x = 0; x < p.width; ++x)
    for (int y = 0; y < p.height; ++y)
      if (free_mask(x, y) && !near_obstacle(x, y)) clear_cells.push_back({x, y});
  if (clear_cells.empty()) throw SceneGenError("no clear spawn candidates");

  int comp_count = 0;
  const auto labels = labelComponents(free_mask, Connectivity::Four, &comp_count);
  std::vector<std::int64_t> comp_size(std::size_t(comp_count), 0);
  for (int x = 0; x < p.width; ++x)
    for (int y = 0; y < p.height; ++y)
      if (labels(x, y) >= 0) ++comp_size[std::size_t(labels(x, y))];
  int main_comp = 0;
  for (int c = 1; c < comp_count; ++c)
    if (comp_size[std::size_t(c)] > comp_size[std::size_t(main_comp)]) main_comp = c;

  std::vector<Cell> candidates;
  for (const Cell& c : clear_cells)
    if (labels(c.x, c.y) == main_comp) candidates.push_back(c);
  if (int(candidates.size()) < p.spawn_count)
    throw SceneGenError("not enough spawn candidates in the main free region");
  for (int k = 0; k < p.spawn_count; ++k) {
    for (int tries = 0; tries < 50; ++tries) {
      const Cell c =
          candidates[std::size_t(rng.uniformInt(0, int(candidates.size()) - 1))];
      if (std::find(scene.spawn_points.begin(), scene.spawn_points.end(), c) ==
          scene.spawn_points.end()) {
        scene.spawn_points.push_back(c);
        break;
      }
    }
  }
  if (int(scene.spawn_points.size()) < p.spawn_count)
    throw SceneGenError("could not pick distinct spawn points");

  // Reachability: every instance must expose at least one adjacent free cell
  // inside the spawn component.
  for (const ObjectInstance& inst : scene.instances) {
    const auto adj = adjacentFreeCells(scene, inst);
    const bool ok = std::any_of(adj.begin(), adj.end(), [&](const Cell& c) {
      return labels(c.x, c.y) == main_comp;
    });
    if (!ok) throw SceneGenError("object instance unreachable from spawns");
  }

  std::ostringstream id;
  id << "scene_" << std::hex << seed;
  scene.id = id.str();
  return scene;
}

}  // namespace

std::vector<const ObjectInstance*> Scene::targetInstances(int category) const {
  std::vector<const ObjectInstance*> out;
  for (const auto& inst : instances)
    if (!inst.decoy && inst.category == category) out.push_back(&inst);
  return out;
}

std::vector<Cell> adjacentFreeCells(const Scene& scene,
                                    const ObjectInstance& inst) {
  static constexpr int dx4[] = {1, -1, 0, 0};
  static constexpr int dy4[] = {0, 0, 1, -1};
  std::vector<Cell> out;
  for (const Cell& c : inst.cells) {
    for (int k = 0; k < 4; ++k) {
      const Cell n{c.x + dx4[k], c.y + dy4[k]};
      if (scene.isFree(n) && std::find(out.begin(), out.end(), n) == out.end())
        out.push_back(n);
    }
  }
  return out;
}

StepResult step(const Scene& scene, const Pose& pose, Action action) {
  switch (action) {
    case Action::TurnLeft:
      return {{pose.x, pose.y, normalizeHeading(pose.heading + 30.0)}, false};
    case Action::TurnRight:
      return {{pose.x, pose.y, normalizeHeading(pose.heading - 30.0)}, false};
    case Action::LookUp:
    case Action::LookDown:
    case Action::Stop:
      return {pose, false};
    case Action::MoveForward:
      break;
  }
  constexpr double kStep = 0.25;
  const Vec2 dir = headingVector(pose.heading);
  const Vec2 from{pose.x, pose.y};
  // Supersampled sweep at half-cell spacing so single-cell walls cannot be
  // tunneled through.
  const int samples = std::max(1, int(std::ceil(kStep / (scene.resolution / 2))));
  for (int k = 1; k <= samples; ++k) {
    const Vec2 q = from + dir * (kStep * k / samples);
    if (!scene.isFree(scene.worldToCell(q))) return {pose, true};
  }
  const Vec2 to = from + dir * kStep;
  return {{to.x(), to.y(), pose.heading}, false};
}

Observation sense(const Scene& scene, const Pose& pose, const SensorConfig& cfg) {
  Observation obs;
  obs.rays.reserve(std::size_t(std::max(0, cfg.ray_count)));
  const double range_cells = cfg.max_range / scene.resolution;
  const Vec2 origin = pose.position() / scene.resolution;

  for (int i = 0; i < cfg.ray_count; ++i) {
    const double bearing =
        cfg.ray_count > 1
            ? -cfg.fov_deg / 2 + cfg.fov_deg * double(i) / (cfg.ray_count - 1)
            : 0.0;
    Ray ray;
    ray.bearing = bearing;
    ray.hit_distance = cfg.max_range;
    const Vec2 dir = headingVector(normalizeHeading(pose.heading + bearing));
    const Vec2 end = origin + dir * range_cells;
    walkRay(origin, end, scene.width, scene.height,
            [&](Cell c, double t) {
              if (!scene.occupancy(c.x, c.y)) return true;
              ray.hit = true;
              ray.hit_is_obstacle = true;
              ray.hit_distance = t * scene.resolution;
              ray.hit_cell = c;
              ray.hit_label = scene.semantics(c.x, c.y);
              ray.hit_instance = scene.instance_ids(c.x, c.y);
              return false;
            });
    obs.rays.push_back(ray);
  }
  return obs;
}

bool checkSuccess(const Scene& scene, const Pose& pose, int target,
                  double radius) {
  const Vec2 p = pose.position();
  for (const ObjectInstance* inst : scene.targetInstances(target)) {
    for (const Cell& c : inst->cells) {
      if ((scene.cellCenter(c) - p).norm() < radius) return true;
    }
  }
  return false;
}

Scene generateScene(std::uint64_t seed, const SceneGenParams& params) {
  if (params.width < 16 || params.height < 16)
    throw SceneGenError("scene dimensions too small");
  if (params.room_size_min < 6)
    throw SceneGenError("room_size_min must be at least 6 cells");

  std::string last_error = "generation failed";
  for (int attempt = 0; attempt < params.max_attempts; ++attempt) {
    Rng rng = Rng(seed).child(std::uint64_t(attempt));
    try {
      return attemptGenerate(seed, params, rng);
    } catch (const SceneGenError& e) {
      last_error = e.what();
    }
  }
  throw SceneGenError(last_error);
}

// --- persistence ---

namespace {

json occupancyToRle(const Scene& scene) {
  // Alternating run lengths over row-major order (index = y*width + x),
  // starting with the count of free cells.
  std::vector<std::int64_t> runs;
  std::uint8_t current = 0;
  std::int64_t count = 0;
  for (int y = 0; y < scene.height; ++y) {
    for (int x = 0; x < scene.width; ++x) {
      const std::uint8_t v = scene.occupancy(x, y) ? 1 : 0;
      if (v == current) {
        ++count;
      } else {
        runs.push_back(count);
        current = v;
        count = 1;
      }
    }
  }
  runs.push_back(count);
  return json(runs);
}

MaskGrid occupancyFromRle(const json& runs, int width, int height) {
  MaskGrid occ = MaskGrid::Zero(width, height);
  std::int64_t idx = 0;
  std::uint8_t value = 0;
  for (const auto& r : runs) {
    const std::int64_t n = r.get<std::int64_t>();
    for (std::int64_t k = 0; k < n; ++k, ++idx) {
      if (idx >= std::int64_t(width) * height)
        throw std::runtime_error("occupancy RLE overruns grid");
      occ(int(idx % width), int(idx / width)) = value;
    }
    value = value ? 0 : 1;
  }
  if (idx != std::int64_t(width) * height)
    throw std::runtime_error("occupancy RLE does not fill grid");
  return occ;
}

}  // namespace

std::string sceneToJson(const Scene& scene) {
  json j;
  j["format"] = "objnav-scene";
  j["version"] = 1;
  j["id"] = scene.id;
  j["width"] = scene.width;
  j["height"] = scene.height;
  j["resolution"] = scene.resolution;
  j["categories"] = scene.category_count;
  j["occupancy_rle"] = occupancyToRle(scene);
  json instances = json::array();
  for (const auto& inst : scene.instances) {
    json cells = json::array();
    for (const Cell& c : inst.cells) cells.push_back({c.x, c.y});
    instances.push_back(
        {{"category", inst.category}, {"decoy", inst.decoy}, {"cells", cells}});
  }
  j["instances"] = instances;
  json spawns = json::array();
  for (const Cell& c : scene.spawn_points) spawns.push_back({c.x, c.y});
  j["spawn_points"] = spawns;
  return j.dump();
}

Scene sceneFromJson(const std::string& text) {
  const json j = json::parse(text);
  if (j.value("format", "") != "objnav-scene")
    throw std::runtime_error("not a scene file");
  if (j.value("version", 0) != 1)
    throw std::runtime_error("unsupported scene version");
  Scene scene;
  scene.id = j.value("id", "");
  scene.width = j.at("width").get<int>();
  scene.height = j.at("height").get<int>();
  scene.resolution = j.at("resolution").get<double>();
  scene.category_count = j.value("categories", 6);
  scene.occupancy = occupancyFromRle(j.at("occupancy_rle"), scene.width,
                                     scene.height);
  scene.semantics = Grid<std::int16_t>::Constant(scene.width, scene.height,
                                                 std::int16_t(kNoCategory));
  scene.instance_ids =
      Grid<std::int32_t>::Constant(scene.width, scene.height, -1);
  for (const auto& ji : j.value("instances", json::array())) {
    ObjectInstance inst;
    inst.category = ji.at("category").get<int>();
    inst.decoy = ji.value("decoy", false);
    for (const auto& jc : ji.at("cells"))
      inst.cells.push_back({jc.at(0).get<int>(), jc.at(1).get<int>()});
    const int id = int(scene.instances.size());
    scene.instances.push_back(inst);
    for (const Cell& c : inst.cells) {
      if (!inBounds(c, scene.width, scene.height))
        throw std::runtime_error("instance cell out of bounds");
      scene.semantics(c.x, c.y) = std::int16_t(inst.category);
      scene.instance_ids(c.x, c.y) = id;
    }
  }
  for (const auto& jc : j.value("spawn_points", json::array()))
    scene.spawn_points.push_back({jc.at(0).get<int>(), jc.at(1).get<int>()});
  return scene;
}

void saveScene(const Scene& scene, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << sceneToJson(scene);
}

Scene loadScene(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return sceneFromJson(ss.str());
}

std::string episodesToJson(const std::vector<Episode>& eps) {
  json j;
  j["format"] = "objnav-episodes";
  j["version"] = 1;
  json list = json::array();
  for (const Episode& e : eps) {
    list.push_back({{"scene", e.scene_id},
                    {"start",
                     {{"x", e.start.x}, {"y", e.start.y}, {"heading", e.start.heading}}},
                    {"target", e.target},
                    {"seed", e.seed},
                    {"max_steps", e.max_steps},
                    {"success_radius", e.success_radius}});
  }
  j["episodes"] = list;
  return j.dump();
}

std::vector<Episode> episodesFromJson(const std::string& text) {
  const json j = json::parse(text);
  if (j.value("format", "") != "objnav-episodes")
    throw std::runtime_error("not an episode dataset");
  std::vector<Episode> out;
  for (const auto& je : j.at("episodes")) {
    Episode e;
    e.scene_id = je.at("scene").get<std::string>();
    e.start.x = je.at("start").at("x").get<double>();
    e.start.y = je.at("start").at("y").get<double>();
    e.start.heading = je.at("start").at("heading").get<double>();
    e.target = je.at("target").get<int>();
    e.seed = je.value("seed", std::uint64_t(0));
    e.max_steps = je.value("max_steps", 500);
    e.success_radius = je.value("success_radius", 1.0);
    out.push_back(e);
  }
  return out;
}

void saveEpisodes(const std::vector<Episode>& eps, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << episodesToJson(eps);
}

std::vector<Episode> loadEpisodes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return episodesFromJson(ss.str());
}

const std::vector<std::string>& defaultCategoryNames() {
  static const std::vector<std::string> names = {
      "chair", "couch", "potted_plant", "bed", "toilet", "tv_monitor"};
  return names;
}

}  // namespace objnav
