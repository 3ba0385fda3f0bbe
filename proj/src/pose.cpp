#include "strata/pose.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <vector>

#include "strata/config.hpp"

namespace strata {

double theta_step(Level level) { return 2.0 * std::numbers::pi / theta_count(level); }

double heading(const Pose& pose) { return pose.theta * theta_step(pose.level); }

double angle_distance(double a, double b, double period) {
  double d = std::fmod(std::abs(a - b), period);
  return std::min(d, period - d);
}

// Bit layout: level 2 | x 15 | y 15 | theta 6 | 4 x foot 6 (biased by 32).
std::uint64_t pack(const Pose& pose) {
  std::uint64_t k = static_cast<std::uint64_t>(as_int(pose.level) & 0x3);
  k = (k << 15) | (static_cast<std::uint64_t>(pose.x) & 0x7fff);
  k = (k << 15) | (static_cast<std::uint64_t>(pose.y) & 0x7fff);
  k = (k << 6) | (static_cast<std::uint64_t>(pose.theta) & 0x3f);
  for (int i = 0; i < 4; ++i) k = (k << 6) | (static_cast<std::uint64_t>(pose.feet[i] + 32) & 0x3f);
  return k;
}

Pose unpack(std::uint64_t k) {
  Pose p;
  for (int i = 3; i >= 0; --i) {
    p.feet[i] = static_cast<std::int8_t>(static_cast<int>(k & 0x3f) - 32);
    k >>= 6;
  }
  p.theta = static_cast<int>(k & 0x3f);
  k >>= 6;
  p.y = static_cast<int>(k & 0x7fff);
  k >>= 15;
  p.x = static_cast<int>(k & 0x7fff);
  k >>= 15;
  p.level = static_cast<Level>(k & 0x3);
  return p;
}

int Lattice::nx(Level level) const {
  const int s = 1 << (as_int(level) - 1);
  return (width + s - 1) / s;
}

int Lattice::ny(Level level) const {
  const int s = 1 << (as_int(level) - 1);
  return (height + s - 1) / s;
}

bool Lattice::contains(const Pose& pose) const {
  return pose.x >= 0 && pose.y >= 0 && pose.x < nx(pose.level) && pose.y < ny(pose.level);
}

WorldPoint Lattice::world(Level level, int x, int y) const {
  const double r = res(level);
  return {origin.x + x * r, origin.y + y * r};
}

WorldPoint Lattice::world(const Pose& pose) const { return world(pose.level, pose.x, pose.y); }

std::array<int, 2> Lattice::nearest(Level level, WorldPoint p) const {
  const double r = res(level);
  return {static_cast<int>(std::floor((p.x - origin.x) / r + 0.5)),
          static_cast<int>(std::floor((p.y - origin.y) / r + 0.5))};
}

std::string format_pose(const Pose& pose, const Lattice& lattice) {
  const WorldPoint w = lattice.world(pose);
  char buf[160];
  int n = std::snprintf(buf, sizeof buf, "L%d %.3f %.3f %d", as_int(pose.level), w.x, w.y, pose.theta);
  const double r = lattice.res(pose.level);
  for (int i = 0; i < feet_count(pose.level); ++i)
    n += std::snprintf(buf + n, sizeof buf - n, " %.3f", pose.feet[i] * r);
  return std::string(buf, n);
}

Pose parse_pose(const std::string& text, const Lattice& lattice) {
  std::istringstream ss(text);
  std::string tag;
  ss >> tag;
  if (tag.size() != 2 || tag[0] != 'L' || tag[1] < '1' || tag[1] > '3')
    throw ContractError("pose must start with L1, L2 or L3: '" + text + "'");
  Pose p;
  p.level = static_cast<Level>(tag[1] - '0');
  double x = 0.0;
  double y = 0.0;
  if (!(ss >> x >> y >> p.theta)) throw ContractError("pose needs x y thetaIndex: '" + text + "'");
  if (p.theta < 0 || p.theta >= theta_count(p.level))
    throw ContractError("theta index out of range: '" + text + "'");
  const auto xy = lattice.nearest(p.level, {x, y});
  p.x = xy[0];
  p.y = xy[1];
  std::vector<double> feet;
  double f = 0.0;
  while (ss >> f) feet.push_back(f);
  if (!ss.eof()) throw ContractError("trailing garbage in pose: '" + text + "'");
  if (!feet.empty() && static_cast<int>(feet.size()) != feet_count(p.level))
    throw ContractError("wrong number of foot coordinates: '" + text + "'");
  const double r = lattice.res(p.level);
  for (std::size_t i = 0; i < feet.size(); ++i)
    p.feet[i] = static_cast<std::int8_t>(std::lround(feet[i] / r));
  if (!lattice.contains(p)) throw ContractError("pose outside the map: '" + text + "'");
  return p;
}

}  // namespace strata
