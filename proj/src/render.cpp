#include "objnav/render.hpp"

#include "objnav/frontier.hpp"

#include <fstream>
#include <stdexcept>

namespace objnav {

namespace {

// Category hues (index mod 6).
constexpr std::uint8_t kCategoryColors[6][3] = {
    {230, 120, 40},  // chair: orange
    {160, 80, 200},  // couch: purple
    {60, 160, 60},   // potted plant: green
    {200, 60, 60},   // bed: red
    {60, 120, 200},  // toilet: blue
    {200, 180, 40},  // tv: yellow
};

}  // namespace

Image::Image(int w, int h, std::uint8_t r, std::uint8_t g, std::uint8_t b)
    : width(w), height(h), rgb(std::size_t(w) * std::size_t(h) * 3) {
  for (std::size_t i = 0; i < rgb.size(); i += 3) {
    rgb[i] = r;
    rgb[i + 1] = g;
    rgb[i + 2] = b;
  }
}

void Image::set(int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  if (x < 0 || x >= width || y < 0 || y >= height) return;
  // Image rows run top to bottom; grid y runs up. Flip here once.
  const std::size_t i =
      (std::size_t(height - 1 - y) * std::size_t(width) + std::size_t(x)) * 3;
  rgb[i] = r;
  rgb[i + 1] = g;
  rgb[i + 2] = b;
}

void Image::writePpm(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write image " + path);
  out << "P6\n" << width << " " << height << "\n255\n";
  out.write(reinterpret_cast<const char*>(rgb.data()),
            std::streamsize(rgb.size()));
  if (!out) throw std::runtime_error("short write on image " + path);
}

Image renderMap(const SemanticMap& map, const std::vector<StepRecord>* trace,
                int frontier_dilation_radius) {
  Image img(map.width(), map.height(), 40, 40, 40);
  const auto& explored = map.explored();
  const auto& obstacle = map.obstacle();
  const auto& visited = map.channel(SemanticMap::kVisited);
  const auto& false_target = map.channel(map.falseTargetChannel());
  const MaskGrid frontier = buildFrontierMap(map, frontier_dilation_radius);

  for (int x = 0; x < map.width(); ++x) {
    for (int y = 0; y < map.height(); ++y) {
      if (explored(x, y)) img.set(x, y, 210, 210, 210);
      if (visited(x, y)) img.set(x, y, 120, 150, 230);
      if (frontier(x, y)) img.set(x, y, 0, 200, 200);
      if (obstacle(x, y)) img.set(x, y, 0, 0, 0);
      for (int k = 0; k < map.categories(); ++k) {
        if (map.channel(map.objectChannel(k))(x, y)) {
          const auto& c = kCategoryColors[k % 6];
          img.set(x, y, c[0], c[1], c[2]);
        }
      }
      if (false_target(x, y)) img.set(x, y, 220, 0, 220);
    }
  }

  if (trace) {
    for (const StepRecord& rec : *trace) {
      const Cell c = map.worldToCell({rec.pose.x, rec.pose.y});
      if (map.contains(c)) img.set(c.x, c.y, 30, 90, 220);
    }
    if (!trace->empty() && trace->back().goal) {
      const Cell g = *trace->back().goal;
      for (int d = -2; d <= 2; ++d) {  // goal cross
        img.set(g.x + d, g.y, 255, 0, 0);
        img.set(g.x, g.y + d, 255, 0, 0);
      }
    }
  }

  const Cell agent = map.agentCell();
  img.set(agent.x, agent.y, 0, 255, 0);
  return img;
}

Image renderScene(const Scene& scene, const std::vector<StepRecord>* trace) {
  Image img(scene.width, scene.height, 235, 235, 235);
  for (int x = 0; x < scene.width; ++x) {
    for (int y = 0; y < scene.height; ++y) {
      if (scene.occupancy(x, y)) img.set(x, y, 50, 50, 50);
      const int cat = scene.semantics(x, y);
      if (cat >= 0) {
        const auto& c = kCategoryColors[cat % 6];
        const bool decoy = scene.instance_ids(x, y) >= 0 &&
                           scene.instances[std::size_t(
                               scene.instance_ids(x, y))].decoy;
        // Decoys render washed out so ground truth stays readable.
        if (decoy)
          img.set(x, y, std::uint8_t(c[0] / 2 + 100),
                  std::uint8_t(c[1] / 2 + 100), std::uint8_t(c[2] / 2 + 100));
        else
          img.set(x, y, c[0], c[1], c[2]);
      }
    }
  }
  for (const Cell& s : scene.spawn_points) img.set(s.x, s.y, 0, 160, 0);
  if (trace) {
    for (const StepRecord& rec : *trace) {
      const Cell c = scene.worldToCell({rec.pose.x, rec.pose.y});
      img.set(c.x, c.y, 30, 90, 220);
    }
  }
  return img;
}

}  // namespace objnav
