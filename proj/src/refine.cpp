#include "strata/refine.hpp"

#include <cmath>
#include <cstdlib>

#include "strata/actions.hpp"
#include "strata/robot.hpp"

namespace strata {

namespace {

int wrap(int theta, int n) { return ((theta % n) + n) % n; }

// Signed shortest difference b - a between orientation indices.
int theta_delta(int a, int b, int n) {
  int d = wrap(b - a, n);
  if (d > n / 2) d -= n;
  return d;
}

struct CorridorProblem {
  const LevelMaps& maps;
  const PlannerConfig& cfg;
  const Corridor& corridor;
  LocalGoal goal;
  std::vector<Maneuver> buf;

  double heuristic(const Pose& p) const { return euclidean_heuristic(maps.lattice, p, goal.target, cfg.robot); }
  bool is_goal(const Pose& p) const { return local_goal_reached(p, goal); }

  void expand(const Pose& p, double cost, std::vector<Edge>& out) {
    buf.clear();
    successors(maps, p, cost, cfg, buf);
    for (const Maneuver& m : buf)
      if (corridor.contains(m.target)) out.push_back({m.target, m.cost, m.target_cost, m.action, 0.0f, false});
  }
};

Path chain_to_path(const std::vector<ChainLink>& chain) {
  Path path;
  double acc = 0.0;
  for (std::size_t i = 0; i < chain.size(); ++i) {
    const double c = i == 0 ? 0.0 : chain[i].edge_cost;
    acc += c;
    path.steps.push_back({chain[i].pose, i == 0 ? ManeuverKind::drive : chain[i].action.kind, c, acc});
  }
  path.total_cost = acc;
  compute_segments(path);
  return path;
}

Pose base_only(const Pose& p) {
  Pose q = p;
  q.feet = {};
  return q;
}

// Level-2 endpoint check for goals that ignore the feet: some pair placement
// within the travel range must be feasible.
bool any_feasible_feet(const LevelMaps& maps, const Pose& base, const PlannerConfig& cfg) {
  const int t = travel_cells(maps.lattice, base.level, cfg.robot);
  Pose q = base;
  for (int a = -t; a <= t; ++a)
    for (int b = -t; b <= t; ++b) {
      q.feet[0] = static_cast<std::int8_t>(a);
      q.feet[1] = static_cast<std::int8_t>(b);
      if (feasible_cost(pose_cost(maps, q, cfg.robot))) return true;
    }
  return false;
}

void finish(RefineOutcome& out, const PlanResult& r, double tolerance) {
  out.expansions = r.stats.expansions;
  if (!r.found) {
    out.verdict = Verdict::no_path;
    return;
  }
  out.path = r.path;
  out.refined_cost = r.path.total_cost;
  out.relative_difference =
      out.original_cost > 0.0 ? std::abs(out.refined_cost - out.original_cost) / out.original_cost
                              : (out.refined_cost > 0.0 ? kInfinity : 0.0);
  out.verdict = exceeds_tolerance(out.original_cost, out.refined_cost, tolerance) ? Verdict::cost_deviation
                                                                                   : Verdict::refineable;
}

}  // namespace

std::uint64_t Corridor::key(int x, int y, int theta) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(x)) << 40) ^
         (static_cast<std::uint64_t>(static_cast<std::uint32_t>(y)) << 16) ^ static_cast<std::uint64_t>(theta);
}

void Corridor::insert(int x, int y, int theta) { cells_.insert(key(x, y, theta)); }

bool Corridor::contains(const Pose& pose) const {
  return pose.level == level_ && cells_.contains(key(pose.x, pose.y, pose.theta));
}

Corridor build_corridor(const Lattice& lattice, const std::vector<Pose>& waypoints, int radius, int theta_radius) {
  if (waypoints.empty()) throw ContractError("corridor needs at least one pose");
  const Level level = waypoints.front().level;
  const int n = theta_count(level);
  Corridor out(level);
  auto add = [&](int x, int y, int theta) {
    for (int dy = -radius; dy <= radius; ++dy)
      for (int dx = -radius; dx <= radius; ++dx) {
        const Pose p{level, x + dx, y + dy, 0, {}};
        if (!lattice.contains(p)) continue;
        for (int dt = -theta_radius; dt <= theta_radius; ++dt) out.insert(x + dx, y + dy, wrap(theta + dt, n));
      }
  };
  add(waypoints.front().x, waypoints.front().y, waypoints.front().theta);
  for (std::size_t i = 1; i < waypoints.size(); ++i) {
    const Pose& a = waypoints[i - 1];
    const Pose& b = waypoints[i];
    if (b.level != level) throw ContractError("corridor waypoints must share one level");
    const int dx = b.x - a.x;
    const int dy = b.y - a.y;
    const int dt = theta_delta(a.theta, b.theta, n);
    const int steps = std::max({std::abs(dx), std::abs(dy), std::abs(dt), 1});
    for (int k = 1; k <= steps; ++k) {
      const double t = static_cast<double>(k) / steps;
      add(a.x + static_cast<int>(std::lround(t * dx)), a.y + static_cast<int>(std::lround(t * dy)),
          wrap(a.theta + static_cast<int>(std::lround(t * dt)), n));
    }
  }
  return out;
}

bool local_goal_reached(const Pose& s, const LocalGoal& goal) {
  const Pose& t = goal.target;
  if (s.level != t.level) return false;
  if (goal.coarse_base) {
    const int n = theta_count(s.level);
    if (std::abs(s.x - t.x) > 1 || std::abs(s.y - t.y) > 1 || std::abs(theta_delta(t.theta, s.theta, n)) > 1)
      return false;
  } else if (s.x != t.x || s.y != t.y || s.theta != t.theta) {
    return false;
  }
  if (goal.feet_tolerance < 0) return true;
  for (int i = 0; i < feet_count(s.level); ++i)
    if (std::abs(s.feet[i] - t.feet[i]) > goal.feet_tolerance) return false;
  return true;
}

PlanResult plan_in_corridor(const LevelMaps& maps, const Pose& start, const LocalGoal& goal, const Corridor& corridor,
                            const PlannerConfig& cfg, double weight, std::size_t max_expansions) {
  if (start.level != goal.target.level || start.level != corridor.level())
    throw ContractError("local search start, goal and corridor must share one level");
  PlanResult result;
  const double c0 = pose_cost(maps, start, cfg.robot);
  if (!feasible_cost(c0)) return result;
  CorridorProblem problem{maps, cfg, corridor, goal, {}};
  SearchLimits limits;
  limits.weights = {weight};
  limits.time_budget = cfg.time_budget;
  limits.max_expansions = max_expansions;
  SearchOutcome so = anytime_search(problem, start, c0, limits);
  result.stats = so.stats;
  if (!so.found) return result;
  result.found = true;
  result.path = chain_to_path(so.chain);
  return result;
}

const char* to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::refineable: return "refineable";
    case Verdict::endpoint_infeasible: return "endpoint_infeasible";
    case Verdict::no_path: return "no_path";
    case Verdict::cost_deviation: return "cost_deviation";
  }
  return "?";
}

bool exceeds_tolerance(double original, double refined, double tolerance) {
  if (!(original > 0.0)) return refined > 0.0;
  return std::abs(refined - original) / original > tolerance;
}

RefineOutcome refine_l2_segment(const LevelMaps& maps, const Pose& start, const std::vector<Pose>& poses,
                                double original_cost, const PlannerConfig& cfg) {
  if (start.level != Level::l1 || poses.empty())
    throw ContractError("refine_l2_segment expects a Level-1 start and Level-2 poses");
  RefineOutcome out;
  out.original_cost = original_cost;
  std::vector<Pose> waypoints{base_only(start)};
  for (const Pose& p : poses) {
    if (p.level != Level::l2) throw ContractError("refine_l2_segment expects Level-2 poses");
    waypoints.push_back(base_only(demote(p)));
  }
  const Pose target = demote(poses.back());
  if (!maps.lattice.contains(start) || !maps.lattice.contains(target) ||
      !feasible_cost(pose_cost(maps, start, cfg.robot)) || !feasible_cost(pose_cost(maps, target, cfg.robot))) {
    out.verdict = Verdict::endpoint_infeasible;
    return out;
  }
  const Corridor corridor = build_corridor(maps.lattice, waypoints);
  // A neutral target is met exactly. Inside a stepping sequence any Level-1
  // pose that promotes onto the target counts: the base may be off by one
  // cell and each foot by half a Level-2 cell.
  const bool neutral = feet_neutral(target);
  const LocalGoal goal{target, neutral ? 0 : 1, !neutral};
  const PlanResult r = plan_in_corridor(maps, start, goal, corridor, cfg, cfg.refine_weight);
  finish(out, r, cfg.refine_tolerance);
  return out;
}

RefineOutcome refine_l2_segment(const LevelMaps& maps, const Pose& start, const Pose& to, double original_cost,
                                const PlannerConfig& cfg) {
  return refine_l2_segment(maps, start, std::vector<Pose>{to}, original_cost, cfg);
}

RefineOutcome refine_l3_segment(const LevelMaps& maps, const Pose& start, const std::vector<Pose>& poses,
                                double original_cost, const PlannerConfig& cfg) {
  if (start.level != Level::l2 || poses.empty())
    throw ContractError("refine_l3_segment expects a Level-2 start and Level-3 poses");
  RefineOutcome out;
  out.original_cost = original_cost;
  std::vector<Pose> waypoints{base_only(start)};
  for (const Pose& p : poses) {
    if (p.level != Level::l3) throw ContractError("refine_l3_segment expects Level-3 poses");
    waypoints.push_back(demote(p));
  }
  const Pose target = waypoints.back();
  if (!maps.lattice.contains(start) || !maps.lattice.contains(target) ||
      !feasible_cost(pose_cost(maps, start, cfg.robot)) || !any_feasible_feet(maps, target, cfg)) {
    out.verdict = Verdict::endpoint_infeasible;
    return out;
  }
  const Corridor corridor = build_corridor(maps.lattice, waypoints);
  const PlanResult r = plan_in_corridor(maps, start, {target, -1}, corridor, cfg, cfg.refine_weight, 2'000'000);
  finish(out, r, cfg.refine_tolerance);
  return out;
}

namespace {

void append(Path& dst, const Path& src) {
  double acc = dst.steps.empty() ? 0.0 : dst.steps.back().accumulated;
  for (std::size_t i = 1; i < src.steps.size(); ++i) {
    PathStep s = src.steps[i];
    acc += s.cost;
    s.accumulated = acc;
    dst.steps.push_back(s);
  }
  dst.total_cost = acc;
}

}  // namespace

RefinedPath refine_path_to_l1(const LevelMaps& maps, const Path& path, const PlannerConfig& cfg) {
  RefinedPath out;
  if (path.steps.empty()) return out;
  if (path.steps.front().pose.level != Level::l1) throw ContractError("path must start at Level 1");
  out.path.steps.push_back(path.steps.front());
  out.path.steps.front().accumulated = 0.0;
  Pose cur = path.steps.front().pose;
  Pose cur_l2{};  // last Level-2 pose of the original path
  bool have_l2 = false;

  // `orig_first`/`orig_last` < 0 report each maneuver's own index range.
  auto refine_l2_run = [&](const Path& l2, std::size_t first, std::size_t last, long orig_first,
                           long orig_last) -> bool {
    // Pairwise between poses whose feet are at neutral: a driving maneuver is
    // one local search, a stepping sequence (displaced feet in between) is
    // refined as a whole.
    for (std::size_t i = first; i <= last; ++i) {
      const std::size_t seg_first = i;
      std::vector<Pose> poses;
      double original = 0.0;
      for (;; ++i) {
        poses.push_back(l2.steps[i].pose);
        original += l2.steps[i].cost;
        if (i == last || (feet_neutral(l2.steps[i].pose) && l2.steps[i].label != ManeuverKind::level_snap)) break;
      }
      const RefineOutcome r = refine_l2_segment(maps, cur, poses, original, cfg);
      const Level from = orig_first < 0 ? Level::l2 : Level::l3;
      out.segments.push_back({from, orig_first < 0 ? seg_first : static_cast<std::size_t>(orig_first),
                              orig_first < 0 ? i : static_cast<std::size_t>(orig_last), original, r.refined_cost,
                              r.verdict});
      if (!r.refineable()) {
        ++out.not_refineable;
        return false;
      }
      append(out.path, r.path);
      cur = out.path.steps.back().pose;
    }
    return true;
  };

  std::size_t i = 1;
  while (i < path.steps.size()) {
    const Level level = path.steps[i].pose.level;
    std::size_t j = i;
    while (j + 1 < path.steps.size() && path.steps[j + 1].pose.level == level) ++j;
    if (level == Level::l1) {
      Path run;
      run.steps.push_back({cur, ManeuverKind::drive, 0.0, 0.0});
      for (std::size_t k = i; k <= j; ++k) run.steps.push_back(path.steps[k]);
      append(out.path, run);
      cur = path.steps[j].pose;
    } else if (level == Level::l2) {
      if (!refine_l2_run(path, i, j, -1, -1)) {
        compute_segments(out.path);
        return out;
      }
      cur_l2 = path.steps[j].pose;
      have_l2 = true;
    } else {
      std::vector<Pose> poses;
      double original = 0.0;
      for (std::size_t k = i; k <= j; ++k) {
        poses.push_back(path.steps[k].pose);
        original += path.steps[k].cost;
      }
      Pose start2 = cur_l2;
      if (!have_l2) {
        const Promotion pr = promote_to(maps, cur, Level::l2, cfg);
        if (!pr.feasible) {
          out.segments.push_back({Level::l3, i, j, original, 0.0, Verdict::endpoint_infeasible});
          ++out.not_refineable;
          compute_segments(out.path);
          return out;
        }
        start2 = pr.pose;
      }
      const RefineOutcome r3 = refine_l3_segment(maps, start2, poses, original, cfg);
      out.segments.push_back({Level::l3, i, j, original, r3.refined_cost, r3.verdict});
      if (!r3.refineable()) {
        ++out.not_refineable;
        compute_segments(out.path);
        return out;
      }
      if (r3.path.steps.size() > 1 && !refine_l2_run(r3.path, 1, r3.path.steps.size() - 1, static_cast<long>(i), static_cast<long>(j))) {
        compute_segments(out.path);
        return out;
      }
      cur_l2 = r3.path.steps.back().pose;
      have_l2 = true;
    }
    i = j + 1;
  }
  out.complete = true;
  compute_segments(out.path);
  return out;
}

}  // namespace strata
