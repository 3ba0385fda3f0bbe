#include "strata/config.hpp"

#include <cmath>

namespace strata {

double RobotGeometry::turn_radius() const { return 0.5 * std::hypot(base_length, base_width); }

void RobotGeometry::validate() const {
  const double dims[] = {base_length,     base_width,      foot_area_length,   foot_area_width,
                         lateral_offset,  sagittal_travel, contact_area_length, contact_area_width,
                         base_clearance,  neutral_longitudinal};
  for (double d : dims)
    if (!(d > 0.0)) throw ContractError("robot dimensions must be positive");
  if (contact_area_length + 1e-9 < 2.0 * (neutral_longitudinal + sagittal_travel))
    throw ContractError("ground-contact area must cover the foot travel envelope");
  if (contact_area_width + 1e-9 < 2.0 * lateral_offset)
    throw ContractError("ground-contact area must cover the lateral foot offsets");
}

void PlannerConfig::validate() const {
  robot.validate();
  if (weights.empty()) throw ContractError("weight schedule is empty");
  for (std::size_t i = 1; i < weights.size(); ++i)
    if (!(weights[i] < weights[i - 1])) throw ContractError("weights must be strictly decreasing");
  if (weights.back() < 1.0) throw ContractError("final weight must be >= 1");
  if (!(level1_window > 0.0) || !(level2_window >= level1_window))
    throw ContractError("level windows must satisfy 0 < level1 <= level2");
  if (!(refine_tolerance > 0.0)) throw ContractError("refine tolerance must be positive");
  if (refine_weight < 1.0) throw ContractError("refine weight must be >= 1");
  if (max_replans < 0) throw ContractError("max_replans must be non-negative");
}

std::string to_string(HeuristicKind kind) {
  return kind == HeuristicKind::dijkstra ? "dijkstra" : "euclidean";
}

std::string to_string(LevelMode mode) {
  switch (mode) {
    case LevelMode::combined: return "combined";
    case LevelMode::l1_only: return "l1";
    case LevelMode::l2_only: return "l2";
    case LevelMode::l3_only: return "l3";
  }
  return "combined";
}

HeuristicKind parse_heuristic(const std::string& text) {
  if (text == "euclidean") return HeuristicKind::euclidean;
  if (text == "dijkstra") return HeuristicKind::dijkstra;
  throw ContractError("unknown heuristic '" + text + "'");
}

LevelMode parse_level_mode(const std::string& text) {
  if (text == "combined") return LevelMode::combined;
  if (text == "l1" || text == "l1_only") return LevelMode::l1_only;
  if (text == "l2" || text == "l2_only") return LevelMode::l2_only;
  if (text == "l3" || text == "l3_only") return LevelMode::l3_only;
  throw ContractError("unknown level mode '" + text + "'");
}

}  // namespace strata
