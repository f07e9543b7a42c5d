#pragma once

#include "objnav/grid_ops.hpp"
#include "objnav/scene.hpp"
#include "objnav/types.hpp"

#include <span>
#include <string>
#include <vector>

namespace objnav {

struct MapConfig {
  int width = 480;   // cells; even so the center cell is well-defined
  int height = 480;
  double resolution = 0.05;  // meters per cell
  int categories = 6;
};

/// The agent's belief map: categories + 5 channels stacked over one W x H
/// grid. Channel 0 holds observed obstacles, 1 the explored area, 2 the
/// single current-agent cell, 3 every past agent cell, 4..4+n-1 the
/// per-category object masks, and the last channel masked-out false targets.
/// The map frame is centered on the episode start pose.
class SemanticMap {
 public:
  static constexpr int kObstacle = 0;
  static constexpr int kExplored = 1;
  static constexpr int kAgent = 2;
  static constexpr int kVisited = 3;

  SemanticMap() { reset(MapConfig{}, Vec2::Zero()); }
  explicit SemanticMap(const MapConfig& cfg) { reset(cfg, Vec2::Zero()); }

  /// Clears every channel and re-homes the frame on `origin_world`, placing
  /// the agent at the center cell (W/2, H/2).
  void reset(const MapConfig& cfg, const Vec2& origin_world);

  int width() const { return cfg_.width; }
  int height() const { return cfg_.height; }
  double resolution() const { return cfg_.resolution; }
  int categories() const { return cfg_.categories; }
  int channelCount() const { return cfg_.categories + 5; }
  int objectChannel(int category) const { return 4 + category; }
  int falseTargetChannel() const { return channelCount() - 1; }

  const MaskGrid& channel(int i) const { return channels_[std::size_t(i)]; }
  const MaskGrid& obstacle() const { return channels_[kObstacle]; }
  const MaskGrid& explored() const { return channels_[kExplored]; }

  Cell agentCell() const { return agent_cell_; }
  const Vec2& originWorld() const { return origin_world_; }

  /// Rasterizes one observation: free cells along each ray become explored,
  /// the hit cell becomes obstacle (and object, when labeled), and the
  /// agent-location channels advance.
  void integrate(const Pose& pose, const Observation& obs);

  /// Moves cells into the false-target channel, clearing them from every
  /// object channel. Idempotent.
  void markFalseTarget(std::span<const Cell> cells);

  Cell worldToCell(const Vec2& p) const;
  Vec2 cellToWorld(Cell c) const;
  bool contains(Cell c) const { return inBounds(c, cfg_.width, cfg_.height); }

  /// Map cell an observed ray hit lands in; shared by integration and the
  /// detection bookkeeping so both mark identical cells.
  Cell rayHitCell(const Pose& pose, const Ray& ray) const;

  /// Count of ray segments that left the map and were clipped.
  long clippedRays() const { return clipped_rays_; }

  /// Bumped whenever a new obstacle cell appears; planners key caches on it.
  int obstacleVersion() const { return obstacle_version_; }

  /// Tight box around everything touched so far (explored or obstacle),
  /// grown by `margin` and clamped to the grid.
  CellBox activeBox(int margin = 0) const {
    return touched_.grown(margin, cfg_.width, cfg_.height);
  }

  long exploredCount() const { return explored_count_; }

  // --- snapshot (binary dump with a JSON header) ---
  void saveSnapshot(const std::string& path) const;
  static SemanticMap loadSnapshot(const std::string& path);

 private:
  void setExplored(Cell c);
  void setObstacle(Cell c, int label);

  MapConfig cfg_;
  std::vector<MaskGrid> channels_;
  Vec2 origin_world_ = Vec2::Zero();
  Cell agent_cell_;
  long clipped_rays_ = 0;
  long explored_count_ = 0;
  int obstacle_version_ = 0;
  CellBox touched_;
};

}  // namespace objnav
