#include "strata/robot.hpp"

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <vector>

namespace strata {

namespace {

const std::vector<Heading>& heading_table(Level level) {
  static const std::array<std::vector<Heading>, 3> tables = [] {
    std::array<std::vector<Heading>, 3> t;
    for (int k = 1; k <= 3; ++k) {
      const Level l = static_cast<Level>(k);
      for (int i = 0; i < theta_count(l); ++i) {
        const double a = i * 2.0 * std::numbers::pi / theta_count(l);
        t[k - 1].push_back({std::cos(a), std::sin(a)});
      }
    }
    return t;
  }();
  return tables[as_int(level) - 1];
}

WorldPoint offset_point(WorldPoint base, Heading h, double lon, double lat) {
  return {base.x + h.c * lon - h.s * lat, base.y + h.s * lon + h.c * lat};
}

int halve(int v, int hint) {
  if (v % 2 == 0) return v / 2;
  return hint > 0 ? (v + 1) / 2 : (v - 1) / 2;
}

// Nearest integer to num/den with ties toward zero (den > 0).
int round_half_to_zero(int num, int den) {
  const int sign = num < 0 ? -1 : 1;
  const int a = std::abs(num);
  const int q = a / den;
  const int r = a % den;
  return sign * (2 * r > den ? q + 1 : q);
}

}  // namespace

Heading unit_heading(Level level, int theta) { return heading_table(level)[theta]; }

std::array<WorldPoint, 4> foot_positions(const Lattice& lattice, const Pose& p, const RobotGeometry& g) {
  const WorldPoint b = lattice.world(p);
  const Heading h = unit_heading(p.level, p.theta);
  const double r = lattice.res(Level::l1);
  return {offset_point(b, h, g.neutral_longitudinal + p.feet[kFrontLeft] * r, g.lateral_offset),
          offset_point(b, h, g.neutral_longitudinal + p.feet[kFrontRight] * r, -g.lateral_offset),
          offset_point(b, h, -g.neutral_longitudinal + p.feet[kRearLeft] * r, g.lateral_offset),
          offset_point(b, h, -g.neutral_longitudinal + p.feet[kRearRight] * r, -g.lateral_offset)};
}

std::array<WorldPoint, 2> pair_positions(const Lattice& lattice, const Pose& p, const RobotGeometry& g) {
  const WorldPoint b = lattice.world(p);
  const Heading h = unit_heading(p.level, p.theta);
  const double r = lattice.res(Level::l2);
  return {offset_point(b, h, g.neutral_longitudinal + p.feet[kFrontPair] * r, 0.0),
          offset_point(b, h, -g.neutral_longitudinal + p.feet[kRearPair] * r, 0.0)};
}

int travel_cells(const Lattice& lattice, Level level, const RobotGeometry& g) {
  return static_cast<int>(std::floor(g.sagittal_travel / lattice.res(level) + 1e-9));
}

double pose_cost(const LevelMaps& maps, const Pose& p, const RobotGeometry& g) {
  if (!maps.lattice.contains(p)) throw ContractError("pose outside the map");
  const GridIndex base{p.x, p.y};
  switch (p.level) {
    case Level::l1: {
      double sum = 0.0;
      for (const WorldPoint& f : foot_positions(maps.lattice, p, g))
        sum += maps.l1.foot_cost.value_or(maps.l1.foot_cost.index_of(f), kInfinity);
      return 0.25 * sum + maps.l1.body_cost[base];
    }
    case Level::l2: {
      const CostGrid& pc = maps.l2.pair_cost[p.theta];
      double sum = 0.0;
      for (const WorldPoint& c : pair_positions(maps.lattice, p, g)) sum += pc.value_or(pc.index_of(c), kInfinity);
      return 0.5 * sum + maps.l2.body_cost[base];
    }
    case Level::l3:
      return maps.l3.area_cost[p.theta][base];
  }
  return kUnknown;
}

Pose snap_to(const Pose& pose, Level to) {
  Pose p = pose;
  while (as_int(p.level) < as_int(to)) {
    Pose q;
    q.level = coarser(p.level);
    q.x = halve(p.x, 0);
    q.y = halve(p.y, 0);
    q.theta = ((p.theta + 1) / 2) % theta_count(q.level);
    p = q;
  }
  return p;
}

Promotion promote(const LevelMaps& maps, const Pose& pose, const PlannerConfig& cfg, std::array<int, 2> hint) {
  if (pose.level == Level::l3) throw ContractError("cannot promote a Level-3 pose");
  const RobotGeometry& g = cfg.robot;
  const Lattice& lat = maps.lattice;
  Promotion out;
  Pose q;
  q.level = coarser(pose.level);
  q.x = halve(pose.x, hint[0]);
  q.y = halve(pose.y, hint[1]);
  q.theta = ((pose.theta + 1) / 2) % theta_count(q.level);

  const double fine_res = lat.res(pose.level);
  double foot_shift = 0.0;  // meters, summed over feet
  if (pose.level == Level::l1) {
    const int spread_limit = static_cast<int>(std::floor(0.5 * g.foot_area_length / fine_res + 1e-9));
    const int travel = travel_cells(lat, Level::l2, g);
    for (int pair = 0; pair < 2; ++pair) {
      const int a = pose.feet[2 * pair];
      const int b = pose.feet[2 * pair + 1];
      if (std::abs(a - b) > spread_limit) return out;
      const int f = round_half_to_zero(a + b, 4);
      if (std::abs(f) > travel) return out;
      q.feet[pair] = static_cast<std::int8_t>(f);
      // Rounding within half a coarse cell is free; anything beyond is a slide.
      foot_shift += (std::max(0, std::abs(2 * f - a) - 1) + std::max(0, std::abs(2 * f - b) - 1)) * fine_res;
    }
  } else {
    const double half = 0.5 * g.contact_area_length;
    for (int pair = 0; pair < 2; ++pair)
      if (g.neutral_longitudinal + std::abs(pose.feet[pair]) * fine_res > half + 1e-9) return out;
  }
  if (!lat.contains(q)) return out;
  if (pose.level == Level::l1) {
    // Each foot slides to its pair contact over standable ground; averaging
    // must not carry a foot across an obstacle.
    const auto from = foot_positions(lat, pose, g);
    const auto to = foot_positions(lat, demote(q), g);
    for (int i = 0; i < 4; ++i) {
      const double len = std::hypot(to[i].x - from[i].x, to[i].y - from[i].y);
      const int n = static_cast<int>(std::ceil(len / (0.5 * fine_res)));
      for (int k = 0; k <= n; ++k) {
        const double t = n ? static_cast<double>(k) / n : 0.0;
        const WorldPoint p{from[i].x + t * (to[i].x - from[i].x), from[i].y + t * (to[i].y - from[i].y)};
        if (!std::isfinite(maps.l1.foot_cost.value_or(maps.l1.foot_cost.index_of(p), kInfinity))) return out;
      }
    }
  }

  const double target = pose_cost(maps, q, g);
  if (!feasible_cost(target)) return out;
  const double source = pose_cost(maps, pose, g);
  if (!feasible_cost(source)) return out;

  const WorldPoint a = lat.world(pose);
  const WorldPoint b = lat.world(q);
  const double shift = std::hypot(b.x - a.x, b.y - a.y);
  const double turn = angle_distance(heading(pose), heading(q), 2.0 * std::numbers::pi);
  out.snap_cost = source * (shift + g.turn_radius() * turn + cfg.costs.foot_shift_factor * foot_shift);
  if (shift < 1e-12 && turn < 1e-12 && foot_shift < 1e-12) out.snap_cost = 0.0;
  out.feasible = true;
  out.pose = q;
  out.target_cost = target;
  return out;
}

Promotion promote_to(const LevelMaps& maps, const Pose& pose, Level to, const PlannerConfig& cfg,
                     std::array<int, 2> hint) {
  Promotion acc;
  acc.pose = pose;
  acc.feasible = true;
  while (as_int(acc.pose.level) < as_int(to)) {
    Promotion step = promote(maps, acc.pose, cfg, hint);
    if (!step.feasible) return step;
    acc.pose = step.pose;
    acc.snap_cost += step.snap_cost;
    acc.target_cost = step.target_cost;
  }
  if (acc.pose.level == pose.level) acc.target_cost = pose_cost(maps, pose, cfg.robot);
  return acc;
}

Pose demote(const Pose& pose) {
  if (pose.level == Level::l1) throw ContractError("cannot demote a Level-1 pose");
  Pose p;
  p.level = finer(pose.level);
  p.x = 2 * pose.x;
  p.y = 2 * pose.y;
  p.theta = 2 * pose.theta;
  if (pose.level == Level::l2) {
    p.feet[kFrontLeft] = p.feet[kFrontRight] = static_cast<std::int8_t>(2 * pose.feet[kFrontPair]);
    p.feet[kRearLeft] = p.feet[kRearRight] = static_cast<std::int8_t>(2 * pose.feet[kRearPair]);
  }
  return p;
}

}  // namespace strata
