#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <absl/container/flat_hash_set.h>

#include "strata/config.hpp"
#include "strata/levels.hpp"
#include "strata/pose.hpp"
#include "strata/search.hpp"

namespace strata {

/// Allowed base poses (x, y, theta) at one level; feet are unconstrained.
class Corridor {
 public:
  explicit Corridor(Level level = Level::l1) : level_(level) {}

  Level level() const { return level_; }
  void insert(int x, int y, int theta);
  bool contains(const Pose& pose) const;
  std::size_t size() const { return cells_.size(); }

 private:
  static std::uint64_t key(int x, int y, int theta);
  Level level_;
  absl::flat_hash_set<std::uint64_t> cells_;
};

/// Interpolates base position and shortest-arc heading between consecutive
/// waypoints (all at one level), rasterizes to the lattice and dilates by
/// `radius` cells (square) and `theta_radius` orientation indices.
Corridor build_corridor(const Lattice& lattice, const std::vector<Pose>& waypoints, int radius = 2,
                        int theta_radius = 1);

/// Goal for a single-level local search: base pose of `target` (same level
/// as the search). `feet_tolerance` < 0 ignores the feet; otherwise each foot
/// offset must lie within that many cells of the target's. With
/// `coarse_base`, the base may differ by one cell and one orientation index
/// (every pose that promotes onto the coarser target).
struct LocalGoal {
  Pose target;
  int feet_tolerance = -1;
  bool coarse_base = false;
};

bool local_goal_reached(const Pose& state, const LocalGoal& goal);

/// Weighted A* at a single level restricted to the corridor, euclidean
/// heuristic. Path steps carry no level snaps.
PlanResult plan_in_corridor(const LevelMaps& maps, const Pose& start, const LocalGoal& goal, const Corridor& corridor,
                            const PlannerConfig& cfg, double weight, std::size_t max_expansions = 400'000);

enum class Verdict : std::uint8_t { refineable, endpoint_infeasible, no_path, cost_deviation };

const char* to_string(Verdict verdict);

/// True when |refined - original| / original exceeds `tolerance`.
bool exceeds_tolerance(double original, double refined, double tolerance);

struct RefineOutcome {
  Verdict verdict = Verdict::no_path;
  Path path;  // refined segment, start pose first (empty unless a path was found)
  double original_cost = 0.0;
  double refined_cost = 0.0;
  double relative_difference = 0.0;
  std::size_t expansions = 0;

  bool refineable() const { return verdict == Verdict::refineable; }
};

/// Refines one Level-2 maneuver (`from` -> `to`) to Level 1, starting at the
/// Level-1 pose `start` (normally the demoted `from`, or the end of the
/// previous refined segment).
RefineOutcome refine_l2_segment(const LevelMaps& maps, const Pose& start, const Pose& to, double original_cost,
                                const PlannerConfig& cfg);
/// Refines a Level-2 stepping sequence (poses after `start`, feet displaced
/// in between) in one local search over the union of pairwise corridors.
RefineOutcome refine_l2_segment(const LevelMaps& maps, const Pose& start, const std::vector<Pose>& poses,
                                double original_cost, const PlannerConfig& cfg);

/// Refines a run of Level-3 poses to Level 2 in one local search over the
/// union of pairwise corridors. `start` is the Level-2 pose the run begins
/// from; `poses` are the Level-3 poses after it.
RefineOutcome refine_l3_segment(const LevelMaps& maps, const Pose& start, const std::vector<Pose>& poses,
                                double original_cost, const PlannerConfig& cfg);

struct SegmentReport {
  Level from_level = Level::l2;
  std::size_t first_step = 0;  // index range in the original path
  std::size_t last_step = 0;
  double original_cost = 0.0;
  double refined_cost = 0.0;
  Verdict verdict = Verdict::refineable;
};

struct RefinedPath {
  bool complete = false;  // every coarse segment was refined
  Path path;              // all Level 1
  std::vector<SegmentReport> segments;
  std::size_t not_refineable = 0;
};

/// Refines every Level-2 and Level-3 part of a planner path down to Level 1.
/// Stops at the first not-refineable segment (path then ends there).
RefinedPath refine_path_to_l1(const LevelMaps& maps, const Path& path, const PlannerConfig& cfg);

/// Continuous refinement while executing a path against ground truth.
struct ExecutionOptions {
  /// Maps the robot "sees" before moving; empty means ground truth everywhere.
  const HeightGrid* initial_map = nullptr;
  /// Re-plan safeguard in maneuvers; 0 means 4x the initial path length + 200.
  std::size_t max_steps = 0;
};

struct ExecutionEvent {
  std::string kind;  // start, execute, refined, not_refineable, replanned, goal, failure
  std::size_t step = 0;
  Pose pose;
  double original_cost = 0.0;
  double refined_cost = 0.0;
  std::string detail;
};

struct ExecutionResult {
  bool reached_goal = false;
  int replans = 0;
  bool all_level1 = true;  // next executed maneuver was always Level 1
  std::vector<ExecutionEvent> events;
  Path executed;
};

/// Advances the robot one maneuver at a time. After each move the Level-1
/// and Level-2 windows are recentered, the window representations are rebuilt
/// from `ground_truth`, coarse path parts entering a finer window are refined
/// and a not-refineable verdict triggers a full re-plan from the current pose.
ExecutionResult simulate_execution(const HeightGrid& ground_truth, const Pose& start, const Pose& goal,
                                   const PlannerConfig& cfg, const ExecutionOptions& options = {});

/// One JSON object per line.
std::string execution_log_jsonl(const ExecutionResult& result, const Lattice& lattice);

}  // namespace strata
