#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "strata/gridmap.hpp"

namespace strata {

enum class Level : std::uint8_t { l1 = 1, l2 = 2, l3 = 3 };

inline int as_int(Level level) { return static_cast<int>(level); }
inline Level coarser(Level level) { return static_cast<Level>(as_int(level) + 1); }
inline Level finer(Level level) { return static_cast<Level>(as_int(level) - 1); }

/// Orientation indices per level: 64, 32, 16.
inline int theta_count(Level level) { return 64 >> (as_int(level) - 1); }
double theta_step(Level level);
/// Number of feet coordinates carried by a pose: 4, 2, 0.
inline int feet_count(Level level) { return level == Level::l1 ? 4 : level == Level::l2 ? 2 : 0; }

/// Robot configuration at one level. Base position and feet are integer
/// lattice coordinates; the lattice of level k has spacing 2^(k-1) times the
/// fine map resolution and all lattices share the fine map origin, so every
/// coarse lattice point is also a fine one.
///
/// Feet: at Level 1, longitudinal offsets of FL, FR, RL, RR from neutral in
/// fine cells; at Level 2, feet[0] and feet[1] hold the front and rear
/// foot-area-pair offsets in Level-2 cells. Unused entries stay zero.
struct Pose {
  Level level = Level::l1;
  int x = 0;
  int y = 0;
  int theta = 0;
  std::array<std::int8_t, 4> feet{};

  friend bool operator==(const Pose&, const Pose&) = default;
};

enum Foot : int { kFrontLeft = 0, kFrontRight = 1, kRearLeft = 2, kRearRight = 3 };
enum Pair : int { kFrontPair = 0, kRearPair = 1 };

std::uint64_t pack(const Pose& pose);
Pose unpack(std::uint64_t key);

/// Shared lattice frame: world position of the fine cell (0,0) center and
/// fine resolution, plus the fine map extent.
struct Lattice {
  WorldPoint origin{};
  double resolution = 0.025;
  int width = 0;   // fine cells
  int height = 0;  // fine cells

  double res(Level level) const { return resolution * (1 << (as_int(level) - 1)); }
  int nx(Level level) const;
  int ny(Level level) const;
  bool contains(const Pose& pose) const;
  WorldPoint world(const Pose& pose) const;
  WorldPoint world(Level level, int x, int y) const;
  /// Nearest lattice point at `level`.
  std::array<int, 2> nearest(Level level, WorldPoint p) const;
};

double heading(const Pose& pose);

/// Smallest absolute angle between two directions that repeat every `period`.
double angle_distance(double a, double b, double period);

/// `L<k> x y thetaIndex [feet...]`, meters with 3 decimals.
std::string format_pose(const Pose& pose, const Lattice& lattice);
Pose parse_pose(const std::string& text, const Lattice& lattice);

}  // namespace strata
