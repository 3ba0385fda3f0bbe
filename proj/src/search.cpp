#include "strata/search.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <queue>

#include "strata/robot.hpp"

namespace strata {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

int sign(double v) { return (v > 1e-9) - (v < -1e-9); }

struct CombinedProblem {
  const LevelMaps& maps;
  const PlannerConfig& cfg;
  Windows windows;
  Pose goal;
  const DijkstraField* field = nullptr;
  std::vector<Maneuver> buf;

  double heuristic(const Pose& p) const {
    if (field) return field->lookup(p);
    return euclidean_heuristic(maps.lattice, p, goal, cfg.robot);
  }

  bool is_goal(const Pose& p) const { return goal_reached(p, goal, false); }

  void expand(const Pose& p, double cost, std::vector<Edge>& out) {
    buf.clear();
    successors(maps, p, cost, cfg, buf);
    for (const Maneuver& m : buf) {
      if (windows.contains(maps.lattice, m.target)) {
        out.push_back({m.target, m.cost, m.target_cost, m.action, 0.0f, false});
      } else {
        lift(p, m.action, out);
      }
    }
  }

  // The maneuver leaves the window of its level: promote and replay it one
  // level up until the result lands inside a window.
  void lift(const Pose& p, ActionId action, std::vector<Edge>& out) const {
    const auto hint = action_hint(p, action, cfg);
    Pose cur = p;
    double snap = 0.0;
    while (cur.level != Level::l3) {
      const Promotion pr = promote(maps, cur, cfg, hint);
      if (!pr.feasible) return;
      cur = pr.pose;
      snap += pr.snap_cost;
      const auto m = apply_action(maps, cur, pr.target_cost, action, cfg);
      if (!m) return;
      if (windows.contains(maps.lattice, m->target)) {
        out.push_back({m->target, snap + m->cost, m->target_cost, action, static_cast<float>(snap), true});
        return;
      }
    }
  }
};

bool in_square(const Lattice& lattice, const Pose& pose, WorldPoint c, double side) {
  const WorldPoint w = lattice.world(pose);
  const double half = 0.5 * side + 1e-9;
  return std::abs(w.x - c.x) <= half && std::abs(w.y - c.y) <= half;
}

}  // namespace

void compute_segments(Path& path) {
  path.segments.clear();
  for (std::size_t i = 0; i < path.steps.size(); ++i) {
    const Level l = path.steps[i].pose.level;
    if (path.segments.empty() || path.segments.back().level != l)
      path.segments.push_back({l, i, i});
    else
      path.segments.back().last = i;
  }
}

bool Windows::contains(const Lattice& lattice, const Pose& pose) const {
  switch (pose.level) {
    case Level::l1: return whole_map_l1 || in_square(lattice, pose, center, level1);
    case Level::l2: return whole_map_l2 || in_square(lattice, pose, center, level2);
    case Level::l3: return true;
  }
  return false;
}

bool goal_reached(const Pose& state, const Pose& goal, bool match_feet) {
  const Level top = as_int(state.level) >= as_int(goal.level) ? state.level : goal.level;
  const Pose a = snap_to(state, top);
  const Pose b = snap_to(goal, top);
  if (a.x != b.x || a.y != b.y || a.theta != b.theta) return false;
  if (match_feet && state.level == goal.level) return state.feet == goal.feet;
  return true;
}

double euclidean_heuristic(const Lattice& lattice, const Pose& pose, const Pose& goal, const RobotGeometry& robot) {
  const WorldPoint a = lattice.world(pose);
  const WorldPoint b = lattice.world(goal);
  const double dist = std::hypot(a.x - b.x, a.y - b.y);
  const double turn = angle_distance(heading(pose), heading(goal), kTwoPi) * robot.turn_radius();
  return std::max(dist, turn);
}

std::array<int, 2> action_hint(const Pose& from, ActionId action, const PlannerConfig& cfg) {
  switch (action.kind) {
    case ManeuverKind::drive: return {sign(action.a), sign(action.b)};
    case ManeuverKind::base_shift: {
      (void)cfg;
      const double a = heading(from);
      return {sign(action.a * std::cos(a)), sign(action.a * std::sin(a))};
    }
    default: return {0, 0};
  }
}

DijkstraField::DijkstraField(const LevelMaps& maps, const Pose& goal, const PlannerConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  const Lattice& lat = maps.lattice;
  const Level3Rep& l3 = maps.l3;
  nx_ = lat.nx(Level::l3);
  ny_ = lat.ny(Level::l3);
  const int nt = theta_count(Level::l3);
  const Pose g3 = snap_to(goal, Level::l3);
  if (!lat.contains(g3)) throw ContractError("goal outside the map; use the euclidean heuristic");

  auto cost = [&](int x, int y, int t) -> double {
    if (x < 0 || y < 0 || x >= nx_ || y >= ny_) return kInfinity;
    return l3.relaxed_area_cost[t][{x, y}];
  };
  if (!std::isfinite(cost(g3.x, g3.y, g3.theta)))
    throw ContractError("goal has no feasible Level-3 pose; use the euclidean heuristic");

  values_.assign(static_cast<std::size_t>(nx_) * ny_ * nt, kInfinity);
  auto id = [&](int x, int y, int t) { return (static_cast<std::size_t>(t) * ny_ + y) * nx_ + x; };

  using Item = std::pair<double, std::uint32_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
  std::vector<double> dist(values_.size(), kInfinity);
  const std::size_t g_id = id(g3.x, g3.y, g3.theta);
  dist[g_id] = 0.0;
  open.push({0.0, static_cast<std::uint32_t>(g_id)});

  const double res = lat.res(Level::l3);
  const double turn = cfg.robot.turn_radius() * theta_step(Level::l3);
  const auto& offsets = drive_offsets();
  std::vector<double> angles;
  for (const auto& d : offsets) angles.push_back(std::atan2(d[1], d[0]));

  while (!open.empty()) {
    const auto [d, u] = open.top();
    open.pop();
    if (d > dist[u]) continue;
    const int x = static_cast<int>(u % nx_);
    const int y = static_cast<int>((u / nx_) % ny_);
    const int t = static_cast<int>(u / (static_cast<std::size_t>(nx_) * ny_));
    const double cu = cost(x, y, t);
    auto relax = [&](int vx, int vy, int vt, double c) {
      const std::size_t v = id(vx, vy, vt);
      if (d + c < dist[v]) {
        dist[v] = d + c;
        open.push({d + c, static_cast<std::uint32_t>(v)});
      }
    };
    Pose pu{Level::l3, x, y, t, {}};
    for (std::size_t k = 0; k < offsets.size(); ++k) {
      const int dx = offsets[k][0];
      const int dy = offsets[k][1];
      const int vx = x + dx;
      const int vy = y + dy;
      const double cv = cost(vx, vy, t);
      if (!std::isfinite(cv)) continue;
      if (std::abs(dx) == 2 || std::abs(dy) == 2) {
        bool ok = true;
        for (int up = 0; up < 2 && ok; ++up) {
          const int mx = x + (dx % 2 == 0 ? dx / 2 : (up ? (dx + 1) / 2 : (dx - 1) / 2));
          const int my = y + (dy % 2 == 0 ? dy / 2 : (up ? (dy + 1) / 2 : (dy - 1) / 2));
          ok = std::isfinite(cost(mx, my, t));
        }
        if (!ok) continue;
      }
      const Pose pv{Level::l3, vx, vy, t, {}};
      if (!level3_move_allowed(maps, pv, pu, angles[k])) continue;
      relax(vx, vy, t, std::hypot(dx, dy) * res * 0.5 * (cu + cv));
    }
    for (int dir : {1, -1}) {
      const int vt = (t + dir + nt) % nt;
      const double cv = cost(x, y, vt);
      if (std::isfinite(cv)) relax(x, y, vt, turn * 0.5 * (cu + cv));
    }
  }
  for (std::size_t i = 0; i < dist.size(); ++i) values_[i] = static_cast<float>(dist[i]);
  seconds_ = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double DijkstraField::at(int x, int y, int theta) const {
  if (x < 0 || y < 0 || x >= nx_ || y >= ny_) return kInfinity;
  return values_[(static_cast<std::size_t>(theta) * ny_ + y) * nx_ + x];
}

double DijkstraField::lookup(const Pose& pose) const {
  const Pose p = snap_to(pose, Level::l3);
  return at(p.x, p.y, p.theta);
}

PlanResult plan(const LevelMaps& maps, const Pose& start, const Pose& goal, const PlannerConfig& cfg) {
  if (cfg.heuristic == HeuristicKind::dijkstra) {
    const DijkstraField field(maps, goal, cfg);
    return plan(maps, start, goal, cfg, &field);
  }
  return plan(maps, start, goal, cfg, nullptr);
}

PlanResult plan(const LevelMaps& maps, const Pose& start, const Pose& goal, const PlannerConfig& cfg,
                const DijkstraField* field) {
  cfg.validate();
  if (!maps.lattice.contains(start)) throw ContractError("start outside the map");
  if (!maps.lattice.contains(goal)) throw ContractError("goal outside the map");
  if (!feasible_cost(pose_cost(maps, goal, cfg.robot))) throw ContractError("goal pose is infeasible");

  Pose s = start;
  Windows windows;
  windows.center = maps.lattice.world(start);
  windows.level1 = cfg.level1_window;
  windows.level2 = cfg.level2_window;
  Level start_level = Level::l1;
  switch (cfg.mode) {
    case LevelMode::combined: break;
    case LevelMode::l1_only: windows.whole_map_l1 = true; break;
    case LevelMode::l2_only: windows.whole_map_l2 = true; start_level = Level::l2; break;
    case LevelMode::l3_only: start_level = Level::l3; break;
  }
  if (start.level != Level::l1 && cfg.mode != LevelMode::l3_only && start.level != start_level)
    throw ContractError("start must be a Level-1 pose");
  if (!feasible_cost(pose_cost(maps, start, cfg.robot))) throw ContractError("start pose is infeasible");
  if (as_int(s.level) < as_int(start_level)) {
    const Promotion pr = promote_to(maps, s, start_level, cfg);
    if (!pr.feasible) throw ContractError("start pose has no feasible pose at the planning level");
    s = pr.pose;
  }

  CombinedProblem problem{maps, cfg, windows, goal, field, {}};
  SearchLimits limits;
  limits.weights = cfg.weights;
  limits.time_budget = cfg.time_budget;
  limits.max_expansions = cfg.max_expansions;
  SearchOutcome so = anytime_search(problem, s, pose_cost(maps, s, cfg.robot), limits);

  PlanResult result;
  result.stats = so.stats;
  if (field) result.stats.heuristic_seconds = field->seconds();
  if (!so.found) return result;
  result.found = true;

  Path& path = result.path;
  path.steps.push_back({start, ManeuverKind::drive, 0.0, 0.0});
  double acc = 0.0;
  auto push = [&](const Pose& p, ManeuverKind k, double c) {
    acc += c;
    path.steps.push_back({p, k, c, acc});
  };
  // Promotion of the start pose itself (single-level modes).
  if (s.level != start.level) {
    const Promotion pr = promote_to(maps, start, s.level, cfg);
    if (pr.snap_cost > 0.0) push(s, ManeuverKind::level_snap, pr.snap_cost);
  }
  for (std::size_t i = 1; i < so.chain.size(); ++i) {
    const ChainLink& prev = so.chain[i - 1];
    const ChainLink& link = so.chain[i];
    double c = link.edge_cost;
    if (link.promoted) {
      const auto hint = action_hint(prev.pose, link.action, cfg);
      const Promotion pr = promote_to(maps, prev.pose, link.pose.level, cfg, hint);
      if (link.snap_cost > 0.0) push(pr.pose, ManeuverKind::level_snap, link.snap_cost);
      c -= link.snap_cost;
    }
    push(link.pose, link.action.kind, c);
  }
  path.total_cost = acc;
  compute_segments(path);
  return result;
}

}  // namespace strata
