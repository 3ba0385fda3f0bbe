#pragma once

#include <array>
#include <string>
#include <vector>

#include "strata/config.hpp"
#include "strata/scenario.hpp"

namespace strata {

/// One basic maneuver scenario. `start`/`goal` are Level-1 poses on the 10 cm
/// lattice so they promote exactly. Cases with `single_action` set compare
/// the cost of that one maneuver instead of a planned path; the Level-3 cost
/// is then a straight drive of the same length.
struct CalibrationCase {
  std::string name;
  Scenario scenario;
  bool single_action = false;
};

/// flat_drive, rough_drive, turn, base_shift, step_0.10, step_0.20, step_0.30.
std::vector<CalibrationCase> basic_suite();

struct CalibrationRow {
  std::string name;
  std::array<double, 3> cost{};  // L1, L2, L3; +inf if unreachable
  double max_relative_difference = 0.0;
  bool pass = false;
};

struct CalibrationReport {
  std::vector<CalibrationRow> rows;
  double tolerance = 0.05;
  double seconds = 0.0;
  bool pass = false;
};

/// |a - b| / min(a, b) over all level pairs.
double max_pairwise_difference(const std::array<double, 3>& costs);

/// Plans every case at each single level (weight 1, euclidean heuristic,
/// search restricted to a corridor around the straight start-goal line).
CalibrationReport calibrate(const PlannerConfig& cfg, const std::vector<CalibrationCase>& suite = basic_suite());

std::string format_calibration(const CalibrationReport& report);
std::string calibration_json(const CalibrationReport& report);

}  // namespace strata
