#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "strata/config.hpp"
#include "strata/levels.hpp"
#include "strata/pose.hpp"

namespace strata {

enum class ManeuverKind : std::uint8_t {
  drive,
  turn,
  step,
  base_shift,
  foot_shift_fwd,
  foot_shift_neutral,
  level_snap,
};

const char* to_string(ManeuverKind kind);

/// Level-independent description of a maneuver. drive: (dx, dy) lattice
/// cells; turn: a = +-1; step: a = foot (L1) or pair (L2), b = landing
/// distance in cells; base_shift: a = +-1; foot_shift_fwd: a = foot or pair;
/// foot_shift_neutral moves every displaced foot that can slide (a unused).
struct ActionId {
  ManeuverKind kind = ManeuverKind::drive;
  std::int8_t a = 0;
  std::int8_t b = 0;
  friend bool operator==(const ActionId&, const ActionId&) = default;
};

struct Maneuver {
  ActionId action;
  Pose target;
  double cost = 0.0;
  double target_cost = 0.0;  // pose cost of `target`
};

/// The 20 translation offsets: 5x5 block minus center and corners.
const std::vector<std::array<int, 2>>& drive_offsets();

/// Translations and +-1 turns with finite target cost. `cost` is the pose
/// cost of `pose`.
void driving_neighbors(const LevelMaps& maps, const Pose& pose, double cost, const PlannerConfig& cfg,
                       std::vector<Maneuver>& out);

/// True if an infinite ground-contact cell lies under a foot (or pair area)
/// or within the obstacle lookahead ahead of it. Always false at Level 3.
bool near_obstacle(const LevelMaps& maps, const Pose& pose, const PlannerConfig& cfg);

bool feet_neutral(const Pose& pose);

/// Abstract steps, base shifts and foot shifts (Levels 1 and 2 only). The
/// caller gates on near_obstacle.
void stepping_neighbors(const LevelMaps& maps, const Pose& pose, double cost, const PlannerConfig& cfg,
                        std::vector<Maneuver>& out);

/// Driving plus, when near an obstacle, stepping maneuvers.
void successors(const LevelMaps& maps, const Pose& pose, double cost, const PlannerConfig& cfg,
                std::vector<Maneuver>& out);

/// Applies one specific action. Empty if it is infeasible or does not exist
/// at the pose's level.
std::optional<Maneuver> apply_action(const LevelMaps& maps, const Pose& pose, double cost, ActionId action,
                                     const PlannerConfig& cfg);

/// Level-3 movement rule over step cells for a translation between two
/// poses with the same orientation.
bool level3_move_allowed(const LevelMaps& maps, const Pose& from, const Pose& to, double move_angle);

/// Step-cost pieces, exposed for tests.
double step_cost(double height_change, const CostParams& costs);
double pair_step_cost(double left_change, double right_change, const CostParams& costs);
double misalignment_cost(double height_gap, const CostParams& costs);

}  // namespace strata
