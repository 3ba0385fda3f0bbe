#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <absl/container/flat_hash_map.h>

#include "strata/actions.hpp"
#include "strata/config.hpp"
#include "strata/levels.hpp"
#include "strata/pose.hpp"

namespace strata {

struct PathStep {
  Pose pose;
  ManeuverKind label = ManeuverKind::drive;
  double cost = 0.0;
  double accumulated = 0.0;
};

struct Segment {
  Level level = Level::l1;
  std::size_t first = 0;  // index into steps, inclusive
  std::size_t last = 0;   // inclusive
};

/// steps[0] is the start pose (label drive, cost 0).
struct Path {
  std::vector<PathStep> steps;
  double total_cost = 0.0;
  std::vector<Segment> segments;
};

/// Rebuilds the segment list: maximal runs of consecutive steps at the same
/// level.
void compute_segments(Path& path);

struct IterationStats {
  double weight = 0.0;
  double cost = 0.0;  // +inf if no solution this iteration
  double seconds = 0.0;
  std::size_t expansions = 0;
};

struct SearchStats {
  std::size_t expansions = 0;
  std::size_t generated = 0;
  std::vector<IterationStats> iterations;
  double heuristic_seconds = 0.0;
  double search_seconds = 0.0;
  bool reused_search_effort = true;
  bool budget_exhausted = false;
};

struct PlanResult {
  bool found = false;
  Path path;
  SearchStats stats;
};

/// Square level windows centered on the planning start.
struct Windows {
  WorldPoint center{};
  double level1 = 3.0;  // side length, m; <= 0 means "no window"
  double level2 = 9.0;
  bool whole_map_l1 = false;
  bool whole_map_l2 = false;

  bool contains(const Lattice& lattice, const Pose& pose) const;
};

/// Goal test at the coarser of the two levels; exact feet only when
/// `match_feet` and the levels agree.
bool goal_reached(const Pose& state, const Pose& goal, bool match_feet);

double euclidean_heuristic(const Lattice& lattice, const Pose& pose, const Pose& goal, const RobotGeometry& robot);

/// Goal-rooted cost-to-go over all Level-3 states (x, y, theta16) using the
/// relaxed area costs (unknown counted as 1.0).
class DijkstraField {
 public:
  DijkstraField() = default;
  /// Throws ContractError if the goal has no feasible Level-3 pose; callers
  /// should fall back to the euclidean heuristic.
  DijkstraField(const LevelMaps& maps, const Pose& goal, const PlannerConfig& cfg);

  bool empty() const { return values_.empty(); }
  /// Cost-to-go of a Level-3 state; +inf if unreachable or off-map.
  double at(int x, int y, int theta) const;
  /// Promotes `pose` to Level 3 (no snap cost) and reads the field.
  double lookup(const Pose& pose) const;
  double seconds() const { return seconds_; }

 private:
  int nx_ = 0;
  int ny_ = 0;
  std::vector<float> values_;
  double seconds_ = 0.0;
};

/// Full planner query over the combined level state space.
PlanResult plan(const LevelMaps& maps, const Pose& start, const Pose& goal, const PlannerConfig& cfg);
/// Same, with a prebuilt Dijkstra field (ignored for the euclidean heuristic).
PlanResult plan(const LevelMaps& maps, const Pose& start, const Pose& goal, const PlannerConfig& cfg,
                const DijkstraField* field);

/// Expansion-level options shared by the planner and the refiner.
struct SearchLimits {
  std::vector<double> weights{1.0};
  double time_budget = 120.0;
  std::size_t max_expansions = 6'000'000;
};

/// Edge produced by a problem's expand().
struct Edge {
  Pose target;
  double cost = 0.0;
  double target_cost = 0.0;
  ActionId action;
  float snap_cost = 0.0f;
  bool promoted = false;
};

/// Direction of a maneuver as a per-axis sign; used to break promotion ties.
std::array<int, 2> action_hint(const Pose& from, ActionId action, const PlannerConfig& cfg);

/// Node chain returned by the engine, start first.
struct ChainLink {
  Pose pose;
  ActionId action;
  double edge_cost = 0.0;
  double snap_cost = 0.0;
  bool promoted = false;
  double g = 0.0;
};

struct SearchOutcome {
  bool found = false;
  std::vector<ChainLink> chain;
  SearchStats stats;
};

/// Anytime repairing A*: successive weighted A* iterations with decreasing
/// weights that keep g-values and re-open only inconsistent states.
/// `Problem` provides expand(pose, pose_cost, edges&), heuristic(pose) and
/// is_goal(pose).
template <class Problem>
SearchOutcome anytime_search(Problem& problem, const Pose& start, double start_cost, const SearchLimits& limits);

}  // namespace strata

#include "strata/search_engine.inl"
