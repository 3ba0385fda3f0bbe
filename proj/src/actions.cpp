#include "strata/actions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>

#include <absl/container/inlined_vector.h>

#include "strata/robot.hpp"

namespace strata {

namespace {

constexpr double kPi = std::numbers::pi;

// One sample along a foot's forward line.
struct Probe {
  bool finite = false;   // foot / pair may stand here
  bool known = false;    // heights known (swing clearance check possible)
  double h = 0.0;        // L1: foot cell height; L2: mean of left and right
  double h_left = 0.0;   // L2 only
  double h_right = 0.0;  // L2 only
  double top = 0.0;      // highest terrain under the probe
};

using ProbeLine = absl::InlinedVector<Probe, 32>;
using Landings = absl::InlinedVector<int, 4>;

double area_height(const Level2Rep& l2, GridIndex center, const std::vector<CellOffset>& area) {
  double sum = 0.0;
  int n = 0;
  for (const CellOffset& o : area) {
    const GridIndex q{center.col + o.dx, center.row + o.dy};
    if (!l2.height.known(q)) continue;
    sum += l2.height[q];
    ++n;
  }
  return n ? sum / n : kUnknown;
}

WorldPoint along(WorldPoint p, Heading h, double d) { return {p.x + h.c * d, p.y + h.s * d}; }

// Samples k = 0..kmax along the heading from the foot (L1) or pair (L2).
ProbeLine probe_line(const LevelMaps& maps, const Pose& pose, int which, int kmax, const RobotGeometry& g) {
  const Heading hd = unit_heading(pose.level, pose.theta);
  ProbeLine out(kmax + 1);
  if (pose.level == Level::l1) {
    const WorldPoint p0 = foot_positions(maps.lattice, pose, g)[which];
    const double r = maps.lattice.res(Level::l1);
    for (int k = 0; k <= kmax; ++k) {
      const GridIndex c = maps.l1.height.index_of(along(p0, hd, k * r));
      Probe& p = out[k];
      p.finite = std::isfinite(maps.l1.foot_cost.value_or(c, kInfinity));
      p.known = maps.l1.height.known(c);
      p.h = p.top = p.known ? maps.l1.height[c] : 0.0;
    }
    return out;
  }
  const Level2Rep& l2 = maps.l2;
  const WorldPoint p0 = pair_positions(maps.lattice, pose, g)[which];
  const double r = maps.lattice.res(Level::l2);
  const CostGrid& pc = l2.pair_cost[pose.theta];
  const auto& centers = l2.area_centers[pose.theta];
  for (int k = 0; k <= kmax; ++k) {
    const GridIndex c = l2.height.index_of(along(p0, hd, k * r));
    Probe& p = out[k];
    p.finite = std::isfinite(pc.value_or(c, kInfinity));
    const GridIndex lc{c.col + centers[0].dx, c.row + centers[0].dy};
    const GridIndex rc{c.col + centers[1].dx, c.row + centers[1].dy};
    p.known = l2.height.known(lc) && l2.height.known(rc);
    if (p.known) p.top = std::max(l2.height[lc], l2.height[rc]);
    if (p.finite) {
      p.h_left = area_height(l2, c, l2.left_area[pose.theta]);
      p.h_right = area_height(l2, c, l2.right_area[pose.theta]);
      p.h = 0.5 * (p.h_left + p.h_right);
      if (std::isnan(p.h)) p.finite = false;
    }
  }
  return out;
}

int max_step_cells(const LevelMaps& maps, const Pose& pose, int offset, const PlannerConfig& cfg) {
  const double r = maps.lattice.res(pose.level);
  const int by_length = static_cast<int>(std::floor(cfg.costs.max_step_length / r - 1e-9));
  const int by_travel = travel_cells(maps.lattice, pose.level, cfg.robot) - offset;
  return std::min(by_length, by_travel);
}

// Valid landing distances along a probe line: the first standable cell after
// an obstacle run, plus the next few standable cells.
Landings landing_options(std::span<const Probe> line, int options, const CostParams& costs) {
  Landings out;
  if (line.empty() || !line[0].finite) return out;
  const double h0 = line[0].h;
  bool blocked = false;
  int first = -1;
  double swing_top = -kInfinity;
  for (int k = 1; k < static_cast<int>(line.size()); ++k) {
    const Probe& p = line[k];
    if (first >= 0 && k >= first + options) break;
    if (p.finite && blocked) {
      if (first < 0) first = k;
      if (std::abs(p.h - h0) <= costs.max_step_height + kHeightEps &&
          swing_top - std::max(h0, p.h) <= costs.max_step_height + kHeightEps)
        out.push_back(k);
    }
    if (!p.known) break;
    if (!p.finite) {
      if (first >= 0) break;
      blocked = true;
    }
    swing_top = std::max(swing_top, p.top);
  }
  return out;
}

// Samples 0..n along the foot (pair) line are all standable.
bool standable_run(const LevelMaps& maps, const Pose& pose, int which, int n, const RobotGeometry& g) {
  const Heading hd = unit_heading(pose.level, pose.theta);
  const double r = maps.lattice.res(pose.level);
  if (pose.level == Level::l1) {
    const WorldPoint p0 = foot_positions(maps.lattice, pose, g)[which];
    for (int k = 0; k <= n; ++k)
      if (!std::isfinite(maps.l1.foot_cost.value_or(maps.l1.foot_cost.index_of(along(p0, hd, k * r)), kInfinity)))
        return false;
    return true;
  }
  const auto line = probe_line(maps, pose, which, n, g);
  return std::all_of(line.begin(), line.end(), [](const Probe& p) { return p.finite; });
}

double mean2(double a, double b) { return 0.5 * (a + b); }

// Ground contacts of `pose` rotated to heading `angle` all stand on finite cells.
bool contacts_clear(const LevelMaps& maps, const Pose& pose, double angle, const RobotGeometry& g) {
  const WorldPoint b = maps.lattice.world(pose);
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  auto at = [&](double lon, double lat) { return WorldPoint{b.x + c * lon - s * lat, b.y + s * lon + c * lat}; };
  if (pose.level == Level::l1) {
    const double r = maps.lattice.res(Level::l1);
    const double lon[4] = {g.neutral_longitudinal, g.neutral_longitudinal, -g.neutral_longitudinal,
                           -g.neutral_longitudinal};
    const double lat[4] = {g.lateral_offset, -g.lateral_offset, g.lateral_offset, -g.lateral_offset};
    for (int i = 0; i < 4; ++i) {
      const WorldPoint f = at(lon[i] + pose.feet[i] * r, lat[i]);
      if (!std::isfinite(maps.l1.foot_cost.value_or(maps.l1.foot_cost.index_of(f), kInfinity))) return false;
    }
    return true;
  }
  const double r = maps.lattice.res(Level::l2);
  for (int pair = 0; pair < 2; ++pair) {
    const double lon = (pair == kFrontPair ? 1 : -1) * g.neutral_longitudinal + pose.feet[pair] * r;
    for (double lat : {g.lateral_offset, -g.lateral_offset})
      if (!maps.l2.drivable(maps.l2.height.index_of(at(lon, lat)))) return false;
  }
  return true;
}

std::optional<Maneuver> drive(const LevelMaps& maps, const Pose& pose, double cost, int dx, int dy,
                              const PlannerConfig& cfg) {
  const RobotGeometry& g = cfg.robot;
  Pose t = pose;
  t.x += dx;
  t.y += dy;
  if (!maps.lattice.contains(t)) return std::nullopt;
  const double tc = pose_cost(maps, t, g);
  if (!feasible_cost(tc)) return std::nullopt;
  if (std::abs(dx) == 2 || std::abs(dy) == 2) {
    // Midpoint of the move, rounded both ways.
    for (int up = 0; up < 2; ++up) {
      Pose m = pose;
      m.x += dx % 2 == 0 ? dx / 2 : (up ? (dx + 1) / 2 : (dx - 1) / 2);
      m.y += dy % 2 == 0 ? dy / 2 : (up ? (dy + 1) / 2 : (dy - 1) / 2);
      if (!maps.lattice.contains(m) || !feasible_cost(pose_cost(maps, m, g))) return std::nullopt;
    }
  }
  if (pose.level == Level::l3 && !level3_move_allowed(maps, pose, t, std::atan2(dy, dx))) return std::nullopt;
  const double len = std::hypot(dx, dy) * maps.lattice.res(pose.level);
  return Maneuver{{ManeuverKind::drive, static_cast<std::int8_t>(dx), static_cast<std::int8_t>(dy)},
                  t, len * mean2(cost, tc), tc};
}

std::optional<Maneuver> turn(const LevelMaps& maps, const Pose& pose, double cost, int dir,
                             const PlannerConfig& cfg) {
  Pose t = pose;
  const int n = theta_count(pose.level);
  t.theta = (pose.theta + dir + n) % n;
  const double tc = pose_cost(maps, t, cfg.robot);
  if (!feasible_cost(tc)) return std::nullopt;
  // Displaced feet sweep a long arc; check intermediate headings so a foot
  // cannot hop over a thin obstacle.
  if (pose.level != Level::l3) {
    const double a0 = heading(pose);
    for (double frac : {0.25, 0.5, 0.75})
      if (!contacts_clear(maps, pose, a0 + dir * frac * theta_step(pose.level), cfg.robot)) return std::nullopt;
  }
  const double c = cfg.robot.turn_radius() * theta_step(pose.level) * mean2(cost, tc);
  return Maneuver{{ManeuverKind::turn, static_cast<std::int8_t>(dir), 0}, t, c, tc};
}

// Step of foot `which` by k cells; `line` is its probe line and k a valid landing.
std::optional<Maneuver> step_on_line(const LevelMaps& maps, const Pose& pose, int which, int k,
                                     std::span<const Probe> line, const PlannerConfig& cfg) {
  const CostParams& cp = cfg.costs;
  Pose t = pose;
  t.feet[which] = static_cast<std::int8_t>(pose.feet[which] + k);
  const double tc = pose_cost(maps, t, cfg.robot);
  if (!feasible_cost(tc)) return std::nullopt;

  double c = 0.0;
  if (pose.level == Level::l1) {
    c = step_cost(line[k].h - line[0].h, cp);
    const int partner = which ^ 1;
    if (t.feet[partner] == t.feet[which]) {
      const WorldPoint pf = foot_positions(maps.lattice, t, cfg.robot)[partner];
      const GridIndex pc = maps.l1.height.index_of(pf);
      if (maps.l1.height.known(pc)) c += misalignment_cost(std::abs(maps.l1.height[pc] - line[k].h), cp);
    }
  } else {
    // A pair step is a left-foot step followed by a right-foot step.
    c = pair_step_cost(line[k].h_left - line[0].h_left, line[k].h_right - line[0].h_right, cp) +
        misalignment_cost(std::abs(line[k].h_left - line[k].h_right), cp);
  }
  return Maneuver{{ManeuverKind::step, static_cast<std::int8_t>(which), static_cast<std::int8_t>(k)}, t, c, tc};
}

std::optional<Maneuver> step(const LevelMaps& maps, const Pose& pose, int which, int k, const PlannerConfig& cfg) {
  const bool l1 = pose.level == Level::l1;
  if (which < 0 || which >= feet_count(pose.level) || k < 1) return std::nullopt;
  const int kmax = max_step_cells(maps, pose, pose.feet[which], cfg);
  if (k > kmax) return std::nullopt;
  const auto line = probe_line(maps, pose, which, kmax, cfg.robot);
  const int options = l1 ? cfg.costs.landing_options_l1 : cfg.costs.landing_options_l2;
  const auto lands = landing_options(line, options, cfg.costs);
  if (std::find(lands.begin(), lands.end(), k) == lands.end()) return std::nullopt;
  return step_on_line(maps, pose, which, k, line, cfg);
}

std::optional<Maneuver> base_shift(const LevelMaps& maps, const Pose& pose, double cost, int dir,
                                   const PlannerConfig& cfg) {
  if (pose.level == Level::l3 || (dir != 1 && dir != -1)) return std::nullopt;
  const double r = maps.lattice.res(pose.level);
  const double cells = cfg.costs.base_shift / r;
  const Heading h = unit_heading(pose.level, pose.theta);
  const int dx = static_cast<int>(std::lround(dir * cells * h.c));
  const int dy = static_cast<int>(std::lround(dir * cells * h.s));
  if (dx == 0 && dy == 0) return std::nullopt;
  const int proj = static_cast<int>(std::lround(dx * h.c + dy * h.s));
  const int travel = travel_cells(maps.lattice, pose.level, cfg.robot);
  Pose t = pose;
  t.x += dx;
  t.y += dy;
  if (!maps.lattice.contains(t)) return std::nullopt;
  for (int i = 0; i < feet_count(pose.level); ++i) {
    const int f = pose.feet[i] - proj;
    if (std::abs(f) > travel) return std::nullopt;
    t.feet[i] = static_cast<std::int8_t>(f);
  }
  const double tc = pose_cost(maps, t, cfg.robot);
  if (!feasible_cost(tc)) return std::nullopt;
  const double len = std::hypot(dx, dy) * r;
  return Maneuver{{ManeuverKind::base_shift, static_cast<std::int8_t>(dir), 0}, t, len * mean2(cost, tc), tc};
}

// Slides one foot (L1) or pair (L2) to a new offset over standable ground.
std::optional<Maneuver> foot_slide(const LevelMaps& maps, const Pose& pose, ManeuverKind kind, int which,
                                   int to, const PlannerConfig& cfg) {
  const int from = pose.feet[which];
  if (to == from) return std::nullopt;
  if (std::abs(to) > travel_cells(maps.lattice, pose.level, cfg.robot)) return std::nullopt;
  const int lo = std::min(from, to);
  Pose base = pose;
  base.feet[which] = static_cast<std::int8_t>(lo);
  if (!standable_run(maps, base, which, std::abs(to - from), cfg.robot)) return std::nullopt;
  Pose t = pose;
  t.feet[which] = static_cast<std::int8_t>(to);
  const double tc = pose_cost(maps, t, cfg.robot);
  if (!feasible_cost(tc)) return std::nullopt;

  auto contact = [&](const Pose& p) {
    if (p.level == Level::l1) {
      const GridIndex c = maps.l1.foot_cost.index_of(foot_positions(maps.lattice, p, cfg.robot)[which]);
      return static_cast<double>(maps.l1.foot_cost.value_or(c, kInfinity));
    }
    const CostGrid& pc = maps.l2.pair_cost[p.theta];
    return static_cast<double>(pc.value_or(pc.index_of(pair_positions(maps.lattice, p, cfg.robot)[which]), kInfinity));
  };
  const double dist = std::abs(to - from) * maps.lattice.res(pose.level);
  const int feet_moved = pose.level == Level::l1 ? 1 : 2;
  const double c = feet_moved * cfg.costs.foot_shift_factor * dist * mean2(contact(pose), contact(t));
  return Maneuver{{kind, static_cast<std::int8_t>(which), 0}, t, c, tc};
}

std::optional<Maneuver> foot_shift_fwd(const LevelMaps& maps, const Pose& pose, int which, const PlannerConfig& cfg) {
  const bool l1 = pose.level == Level::l1;
  if (pose.level == Level::l3) return std::nullopt;
  if (l1 ? (which != kFrontLeft && which != kFrontRight) : which != kFrontPair) return std::nullopt;
  const int cells = static_cast<int>(std::lround(cfg.costs.foot_shift / maps.lattice.res(pose.level)));
  return foot_slide(maps, pose, ManeuverKind::foot_shift_fwd, which, pose.feet[which] + cells, cfg);
}

// Every displaced foot (pair) that can slide over standable ground returns to
// neutral in one maneuver. Feet that would cross an obstacle stay put.
std::optional<Maneuver> foot_shift_neutral(const LevelMaps& maps, const Pose& pose, const PlannerConfig& cfg) {
  if (pose.level == Level::l3) return std::nullopt;
  Maneuver out{{ManeuverKind::foot_shift_neutral, 0, 0}, pose, 0.0, 0.0};
  bool moved = false;
  for (int which = 0; which < feet_count(pose.level); ++which) {
    const auto m = foot_slide(maps, out.target, ManeuverKind::foot_shift_neutral, which, 0, cfg);
    if (!m) continue;
    out.target = m->target;
    out.cost += m->cost;
    out.target_cost = m->target_cost;
    moved = true;
  }
  if (!moved) return std::nullopt;
  return out;
}

}  // namespace

const char* to_string(ManeuverKind kind) {
  switch (kind) {
    case ManeuverKind::drive: return "drive";
    case ManeuverKind::turn: return "turn";
    case ManeuverKind::step: return "step";
    case ManeuverKind::base_shift: return "base_shift";
    case ManeuverKind::foot_shift_fwd: return "foot_shift_fwd";
    case ManeuverKind::foot_shift_neutral: return "foot_shift_neutral";
    case ManeuverKind::level_snap: return "level_snap";
  }
  return "?";
}

double step_cost(double height_change, const CostParams& costs) {
  return costs.step_effort + costs.step_height_effort * std::abs(height_change);
}

double pair_step_cost(double left_change, double right_change, const CostParams& costs) {
  return 2.0 * costs.pair_step_effort + costs.step_height_effort * (std::abs(left_change) + std::abs(right_change));
}

double misalignment_cost(double height_gap, const CostParams& costs) {
  return height_gap > costs.misalignment_tolerance ? costs.misalignment_penalty * height_gap : 0.0;
}

const std::vector<std::array<int, 2>>& drive_offsets() {
  static const std::vector<std::array<int, 2>> offsets = [] {
    std::vector<std::array<int, 2>> v;
    for (int dy = -2; dy <= 2; ++dy)
      for (int dx = -2; dx <= 2; ++dx)
        if ((dx || dy) && !(std::abs(dx) == 2 && std::abs(dy) == 2)) v.push_back({dx, dy});
    return v;
  }();
  return offsets;
}

bool level3_move_allowed(const LevelMaps& maps, const Pose& from, const Pose& to, double move_angle) {
  const Level3Rep& l3 = maps.l3;
  const double tol = 2.0 * kPi / theta_count(Level::l3);
  for (const Pose* p : {&from, &to}) {
    const GridIndex c{p->x, p->y};
    const std::uint8_t flags = l3.step_flags[p->theta][l3.classes.offset(c)];
    if (!(flags & kHasStep)) continue;
    if (!(flags & kHeadingOk)) return false;
    for (const CellOffset& o : l3.contact_area[p->theta]) {
      const GridIndex q{c.col + o.dx, c.row + o.dy};
      if (l3.classes.at(q) != TerrainClass::step) continue;
      if (angle_distance(move_angle, l3.classes.alpha_at(q), 0.5 * kPi) >= tol) return false;
    }
  }
  return true;
}

void driving_neighbors(const LevelMaps& maps, const Pose& pose, double cost, const PlannerConfig& cfg,
                       std::vector<Maneuver>& out) {
  for (const auto& d : drive_offsets())
    if (auto m = drive(maps, pose, cost, d[0], d[1], cfg)) out.push_back(*m);
  for (int dir : {1, -1})
    if (auto m = turn(maps, pose, cost, dir, cfg)) out.push_back(*m);
}

bool near_obstacle(const LevelMaps& maps, const Pose& pose, const PlannerConfig& cfg) {
  if (pose.level == Level::l3) return false;
  const RobotGeometry& g = cfg.robot;
  const double r = maps.lattice.res(pose.level);
  const Heading hd = unit_heading(pose.level, pose.theta);
  // Each side is scanned from the rear contact to the front contact plus the
  // lookahead, so a robot straddling an obstacle counts as near it.
  auto blocked = [&](WorldPoint from, double length, double lateral) {
    const WorldPoint p0{from.x - hd.s * lateral, from.y + hd.c * lateral};
    const int n = static_cast<int>(std::floor(length / r + 1e-9));
    for (int k = 0; k <= n; ++k) {
      const WorldPoint q = along(p0, hd, k * r);
      if (pose.level == Level::l1) {
        if (!std::isfinite(maps.l1.foot_cost.value_or(maps.l1.foot_cost.index_of(q), kInfinity))) return true;
      } else if (!maps.l2.drivable(maps.l2.height.index_of(q))) {
        return true;
      }
    }
    return false;
  };
  const double look = cfg.costs.obstacle_lookahead;
  if (pose.level == Level::l1) {
    const auto f = foot_positions(maps.lattice, pose, g);
    const double span_l = 2 * g.neutral_longitudinal + (pose.feet[kFrontLeft] - pose.feet[kRearLeft]) * r;
    const double span_r = 2 * g.neutral_longitudinal + (pose.feet[kFrontRight] - pose.feet[kRearRight]) * r;
    return blocked(f[kRearLeft], span_l + look, 0.0) || blocked(f[kRearRight], span_r + look, 0.0);
  }
  const auto p = pair_positions(maps.lattice, pose, g);
  const double span = 2 * g.neutral_longitudinal + (pose.feet[kFrontPair] - pose.feet[kRearPair]) * r;
  return blocked(p[kRearPair], span + look, g.lateral_offset) || blocked(p[kRearPair], span + look, -g.lateral_offset);
}

bool feet_neutral(const Pose& pose) {
  for (int i = 0; i < feet_count(pose.level); ++i)
    if (pose.feet[i] != 0) return false;
  return true;
}

namespace {

int displacement(const Pose& p) {
  int s = 0;
  for (int i = 0; i < feet_count(p.level); ++i) s += std::abs(p.feet[i]);
  return s;
}

// Moves that bring displaced feet back toward neutral.
void normalizing_neighbors(const LevelMaps& maps, const Pose& pose, double cost, const PlannerConfig& cfg,
                           std::vector<Maneuver>& out) {
  for (int dir : {1, -1})
    if (auto m = base_shift(maps, pose, cost, dir, cfg); m && displacement(m->target) < displacement(pose))
      out.push_back(*m);
  if (auto m = foot_shift_neutral(maps, pose, cfg)) out.push_back(*m);
}

}  // namespace

void stepping_neighbors(const LevelMaps& maps, const Pose& pose, double cost, const PlannerConfig& cfg,
                        std::vector<Maneuver>& out) {
  if (pose.level == Level::l3) return;
  const bool l1 = pose.level == Level::l1;
  const int n = feet_count(pose.level);
  const int options = l1 ? cfg.costs.landing_options_l1 : cfg.costs.landing_options_l2;
  const int look = static_cast<int>(std::floor(cfg.costs.obstacle_lookahead / maps.lattice.res(pose.level) + 1e-9));
  for (int which = 0; which < n; ++which) {
    const int kmax = max_step_cells(maps, pose, pose.feet[which], cfg);
    const bool front = l1 ? which <= kFrontRight : which == kFrontPair;
    const int len = std::max(kmax, front ? look : 0);
    if (len < 1) continue;
    // One probe line serves both the landings and the lookahead.
    const auto line = probe_line(maps, pose, which, len, cfg.robot);
    bool can_step = false;
    if (kmax >= 1) {
      const std::span<const Probe> reach(line.data(), kmax + 1);
      for (int k : landing_options(reach, options, cfg.costs)) {
        if (auto m = step_on_line(maps, pose, which, k, reach, cfg)) {
          out.push_back(*m);
          can_step = true;
        }
      }
    }
    // A front foot creeps forward only toward an obstacle it cannot yet step over.
    if (front && !can_step && look >= 1) {
      const bool obstacle =
          std::any_of(line.begin() + 1, line.begin() + look + 1, [](const Probe& p) { return !p.finite; });
      if (obstacle)
        if (auto m = foot_shift_fwd(maps, pose, which, cfg)) out.push_back(*m);
    }
  }
  if (auto m = base_shift(maps, pose, cost, 1, cfg)) out.push_back(*m);
  if (auto m = base_shift(maps, pose, cost, -1, cfg); m && displacement(m->target) < displacement(pose))
    out.push_back(*m);
  if (auto m = foot_shift_neutral(maps, pose, cfg)) out.push_back(*m);
}

void successors(const LevelMaps& maps, const Pose& pose, double cost, const PlannerConfig& cfg,
                std::vector<Maneuver>& out) {
  const bool near = near_obstacle(maps, pose, cfg);
  // The robot drives and turns only with its feet at neutral; displaced
  // feet exist only inside a stepping sequence.
  if (feet_neutral(pose)) driving_neighbors(maps, pose, cost, cfg, out);
  if (near)
    stepping_neighbors(maps, pose, cost, cfg, out);
  else if (!feet_neutral(pose))
    normalizing_neighbors(maps, pose, cost, cfg, out);
}

std::optional<Maneuver> apply_action(const LevelMaps& maps, const Pose& pose, double cost, ActionId action,
                                     const PlannerConfig& cfg) {
  switch (action.kind) {
    case ManeuverKind::drive: return drive(maps, pose, cost, action.a, action.b, cfg);
    case ManeuverKind::turn: return turn(maps, pose, cost, action.a, cfg);
    case ManeuverKind::step:
      if (pose.level == Level::l3) return std::nullopt;
      return step(maps, pose, action.a, action.b, cfg);
    case ManeuverKind::base_shift: return base_shift(maps, pose, cost, action.a, cfg);
    case ManeuverKind::foot_shift_fwd: return foot_shift_fwd(maps, pose, action.a, cfg);
    case ManeuverKind::foot_shift_neutral: return foot_shift_neutral(maps, pose, cfg);
    case ManeuverKind::level_snap: return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace strata
