#pragma once

#include <Eigen/Core>

#include <cmath>
#include <compare>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

namespace objnav {

/// Dense grid storage. Grids are indexed as grid(x, y) with x in [0, width)
/// and y in [0, height); width maps to Eigen rows, height to Eigen cols.
template <class Scalar>
using Grid = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using MaskGrid = Grid<std::uint8_t>;
using FloatGrid = Grid<float>;
using Vec2 = Eigen::Vector2d;

struct Cell {
  int x = 0;
  int y = 0;

  friend bool operator==(const Cell&, const Cell&) = default;
  // Lexicographic (x, then y). Used for deterministic tie-breaking.
  friend auto operator<=>(const Cell&, const Cell&) = default;
};

inline double cellDistance(Cell a, Cell b) {
  return std::hypot(double(a.x - b.x), double(a.y - b.y));
}

/// Continuous agent pose. Heading in degrees, counter-clockwise from +x,
/// normalized to [0, 360).
struct Pose {
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;

  Vec2 position() const { return {x, y}; }
};

inline double normalizeHeading(double deg) {
  deg = std::fmod(deg, 360.0);
  if (deg < 0.0) deg += 360.0;
  return deg;
}

/// Signed smallest angular difference a - b, in (-180, 180].
inline double headingDiff(double a, double b) {
  double d = std::fmod(a - b, 360.0);
  if (d <= -180.0) d += 360.0;
  if (d > 180.0) d -= 360.0;
  return d;
}

inline Vec2 headingVector(double deg) {
  const double r = deg * M_PI / 180.0;
  return {std::cos(r), std::sin(r)};
}

enum class Action : std::uint8_t {
  MoveForward = 0,
  TurnLeft,
  TurnRight,
  LookUp,
  LookDown,
  Stop,
};

inline const char* toString(Action a) {
  switch (a) {
    case Action::MoveForward: return "move_forward";
    case Action::TurnLeft: return "turn_left";
    case Action::TurnRight: return "turn_right";
    case Action::LookUp: return "look_up";
    case Action::LookDown: return "look_down";
    case Action::Stop: return "stop";
  }
  return "?";
}

/// Inclusive cell box; used to restrict grid passes to the touched region.
struct CellBox {
  int x0 = 0, y0 = 0, x1 = -1, y1 = -1;  // empty when x1 < x0

  bool empty() const { return x1 < x0 || y1 < y0; }
  bool contains(Cell c) const {
    return c.x >= x0 && c.x <= x1 && c.y >= y0 && c.y <= y1;
  }
  void expandTo(Cell c) {
    if (empty()) {
      x0 = x1 = c.x;
      y0 = y1 = c.y;
      return;
    }
    x0 = std::min(x0, c.x);
    x1 = std::max(x1, c.x);
    y0 = std::min(y0, c.y);
    y1 = std::max(y1, c.y);
  }
  CellBox grown(int margin, int width, int height) const {
    if (empty()) return {};
    CellBox b;
    b.x0 = std::max(0, x0 - margin);
    b.y0 = std::max(0, y0 - margin);
    b.x1 = std::min(width - 1, x1 + margin);
    b.y1 = std::min(height - 1, y1 + margin);
    return b;
  }
};

/// SplitMix64 stream. Small, fast, and stable across platforms, which keeps
/// suite results byte-identical regardless of toolchain.
struct Rng {
  std::uint64_t state = 0x9E3779B97F4A7C15ULL;

  Rng() = default;
  explicit Rng(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1).
  double uniform() { return double(next() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [lo, hi] inclusive.
  int uniformInt(int lo, int hi) {
    if (hi <= lo) return lo;
    const std::uint64_t span = std::uint64_t(hi - lo) + 1;
    return lo + int(next() % span);
  }

  bool bernoulli(double p) { return uniform() < p; }

  /// Derived independent stream; mixing the tag through next() decorrelates
  /// streams with nearby tags.
  Rng child(std::uint64_t tag) const {
    Rng r(state ^ (tag * 0xBF58476D1CE4E5B9ULL + 0x94D049BB133111EBULL));
    r.next();
    return r;
  }
};

/// Stateless mix of several 64-bit words into one seed.
inline std::uint64_t hashCombine(std::uint64_t a, std::uint64_t b) {
  Rng r(a ^ (b + 0x9E3779B97F4A7C15ULL + (a << 6) + (a >> 2)));
  return r.next();
}

constexpr double kInfinity = std::numeric_limits<double>::infinity();

}  // namespace objnav

template <>
struct std::hash<objnav::Cell> {
  std::size_t operator()(const objnav::Cell& c) const noexcept {
    return std::hash<std::uint64_t>{}(
        (std::uint64_t(std::uint32_t(c.x)) << 32) | std::uint32_t(c.y));
  }
};
