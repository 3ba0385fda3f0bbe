#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace strata {

/// Thrown when a caller breaks a documented precondition.
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Robot dimensions in meters. None of these come from a datasheet; they
/// only need to be plausible for a four-legged wheeled base.
struct RobotGeometry {
  double base_length = 0.8;
  double base_width = 0.7;
  double foot_area_length = 0.25;
  double foot_area_width = 0.1;
  double lateral_offset = 0.3;
  // Longitudinal distance of the front/rear feet from the base center in the
  // neutral pose.
  double neutral_longitudinal = 0.35;
  // Feet may move +-sagittal_travel around neutral.
  double sagittal_travel = 0.2;
  // Ground-contact area a_r used by the coarsest level; covers all four foot
  // travel envelopes.
  double contact_area_length = 1.1;
  double contact_area_width = 0.7;
  double base_clearance = 0.3;

  double turn_radius() const;
  void validate() const;
};

/// Terrain thresholds and maneuver cost constants shared by all levels.
struct CostParams {
  double foot_cost_slope = 107.0;
  double pair_cost_slope = 107.0;
  // Height-difference limits for driving at 2.5 cm and 5 cm resolution. The
  // 5 cm value is what a raw 4 cm edge becomes after binomial subsampling
  // when the edge falls between two coarse cells.
  double drive_limit_l1 = 0.04;
  double drive_limit_l2 = 0.02;

  double flat_limit = 2e-4;
  double rough_limit = 0.05;
  double flat_cost = 1.0;
  double rough_cost = 1.4;
  double step_cell_base = 76.0;
  double step_cell_slope = 2.95;
  double max_step_length = 0.45;
  double max_step_height = 0.3;
  double ambiguous_resultant = 0.1;
  double unknown_area_fraction = 0.25;

  double slope_penalty = 0.5;

  // Abstract step: effort per foot plus a term per meter of height change.
  double step_effort = 3.58;
  double step_height_effort = 0.05;
  // Per foot of a Level-2 pair step.
  double pair_step_effort = 3.40;
  double foot_shift_factor = 1.0;
  double misalignment_penalty = 10.0;
  double misalignment_tolerance = 0.02;
  double base_shift = 0.05;
  double foot_shift = 0.05;
  int landing_options_l1 = 1;
  int landing_options_l2 = 1;
  double obstacle_lookahead = 0.5;
};

enum class HeuristicKind { euclidean, dijkstra };
enum class LevelMode { combined, l1_only, l2_only, l3_only };

struct PlannerConfig {
  RobotGeometry robot;
  CostParams costs;
  double level1_window = 3.0;
  double level2_window = 9.0;
  std::vector<double> weights{3.0, 2.0, 1.5, 1.25, 1.0};
  HeuristicKind heuristic = HeuristicKind::euclidean;
  LevelMode mode = LevelMode::combined;
  double time_budget = 120.0;
  std::size_t max_expansions = 6'000'000;
  double refine_tolerance = 0.25;
  double refine_weight = 1.25;
  double calibration_tolerance = 0.05;
  int max_replans = 20;

  void validate() const;
};

std::string to_string(HeuristicKind kind);
std::string to_string(LevelMode mode);
HeuristicKind parse_heuristic(const std::string& text);
LevelMode parse_level_mode(const std::string& text);

}  // namespace strata
