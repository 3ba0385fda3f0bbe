#include "strata/calibration.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "strata/actions.hpp"
#include "strata/levels.hpp"
#include "strata/refine.hpp"
#include "strata/robot.hpp"

namespace strata {

namespace {

constexpr double kNoCost = std::numeric_limits<double>::infinity();

CalibrationCase make_case(const std::string& name, const std::string& kind, ParamMap params, const std::string& start,
                          const std::string& goal, bool single = false) {
  CalibrationCase c;
  c.name = name;
  c.scenario = generate_scenario(kind, params);
  c.scenario.name = name;
  c.scenario.start = start;
  c.scenario.goal = goal;
  c.single_action = single;
  return c;
}

double plan_level(const LevelMaps& maps, const Pose& start, const Pose& goal, Level level, const PlannerConfig& cfg) {
  const Promotion ps = promote_to(maps, start, level, cfg);
  const Promotion pg = promote_to(maps, goal, level, cfg);
  if (!ps.feasible || !pg.feasible) return kNoCost;
  const Corridor corridor = build_corridor(maps.lattice, {ps.pose, pg.pose});
  const LocalGoal lg{pg.pose, level == Level::l3 ? -1 : 0};
  const PlanResult r = plan_in_corridor(maps, ps.pose, lg, corridor, cfg, 1.0, cfg.max_expansions);
  return r.found ? r.path.total_cost : kNoCost;
}

double single_action(const LevelMaps& maps, const Pose& start, Level level, const PlannerConfig& cfg) {
  const Promotion ps = promote_to(maps, start, level, cfg);
  if (!ps.feasible) return kNoCost;
  const double c0 = pose_cost(maps, ps.pose, cfg.robot);
  if (level != Level::l3) {
    const auto m = apply_action(maps, ps.pose, c0, {ManeuverKind::base_shift, 1, 0}, cfg);
    return m ? m->cost : kNoCost;
  }
  // No base shift at Level 3: the same distance driven straight ahead.
  const auto m = apply_action(maps, ps.pose, c0, {ManeuverKind::drive, 1, 0}, cfg);
  return m ? m->cost * cfg.costs.base_shift / maps.lattice.res(Level::l3) : kNoCost;
}

}  // namespace

std::vector<CalibrationCase> basic_suite() {
  std::vector<CalibrationCase> suite;
  const ParamMap patch{{"size_x", "3"}, {"size_y", "2"}};
  suite.push_back(make_case("flat_drive", "flat", patch, "L1 1.0 1.0 0", "L1 2.0 1.0 0"));
  suite.push_back(make_case("rough_drive", "rough", patch, "L1 1.0 1.0 0", "L1 2.0 1.0 0"));
  suite.push_back(make_case("turn", "flat", patch, "L1 1.5 1.0 0", "L1 1.5 1.0 16"));
  suite.push_back(make_case("base_shift", "flat", patch, "L1 1.5 1.0 0", "L1 1.5 1.0 0", true));
  for (const char* h : {"0.10", "0.20", "0.30"}) {
    const ParamMap stair{{"count", "1"}, {"riser", h}, {"start_x", "2.0"}, {"landing", "1.5"}, {"size_y", "1.6"}};
    suite.push_back(make_case(std::string("step_") + h, "stairs", stair, "L1 1.2 0.8 0", "L1 2.8 0.8 0"));
  }
  return suite;
}

double max_pairwise_difference(const std::array<double, 3>& c) {
  double worst = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      if (!std::isfinite(c[i]) || !std::isfinite(c[j])) return kNoCost;
      const double lo = std::min(c[i], c[j]);
      const double d = std::abs(c[i] - c[j]);
      worst = std::max(worst, lo > 0.0 ? d / lo : (d > 0.0 ? kNoCost : 0.0));
    }
  return worst;
}

CalibrationReport calibrate(const PlannerConfig& cfg, const std::vector<CalibrationCase>& suite) {
  const auto t0 = std::chrono::steady_clock::now();
  CalibrationReport report;
  report.tolerance = cfg.calibration_tolerance;
  report.pass = true;
  for (const CalibrationCase& c : suite) {
    const LevelMaps maps = build_levels(c.scenario.map, cfg);
    const Pose start = parse_pose(c.scenario.start, maps.lattice);
    const Pose goal = parse_pose(c.scenario.goal, maps.lattice);
    CalibrationRow row;
    row.name = c.name;
    for (Level level : {Level::l1, Level::l2, Level::l3}) {
      row.cost[as_int(level) - 1] = c.single_action ? single_action(maps, start, level, cfg)
                                                    : plan_level(maps, start, goal, level, cfg);
    }
    row.max_relative_difference = max_pairwise_difference(row.cost);
    row.pass = row.max_relative_difference <= cfg.calibration_tolerance;
    report.pass = report.pass && row.pass;
    report.rows.push_back(row);
  }
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

std::string format_calibration(const CalibrationReport& report) {
  std::ostringstream out;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-12s %10s %10s %10s %9s  %s\n", "scenario", "L1", "L2", "L3", "max diff", "result");
  out << buf;
  for (const CalibrationRow& r : report.rows) {
    std::snprintf(buf, sizeof buf, "%-12s %10.4f %10.4f %10.4f %8.2f%%  %s\n", r.name.c_str(), r.cost[0], r.cost[1],
                  r.cost[2], 100.0 * r.max_relative_difference, r.pass ? "ok" : "FAIL");
    out << buf;
  }
  std::snprintf(buf, sizeof buf, "tolerance %.1f%%, %.2f s, %s\n", 100.0 * report.tolerance, report.seconds,
                report.pass ? "all within tolerance" : "calibration FAILED");
  out << buf;
  return out.str();
}

std::string calibration_json(const CalibrationReport& report) {
  nlohmann::ordered_json j;
  j["tolerance"] = report.tolerance;
  j["pass"] = report.pass;
  j["rows"] = nlohmann::ordered_json::array();
  auto num = [](double v) { return std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(nullptr); };
  for (const CalibrationRow& r : report.rows) {
    j["rows"].push_back({{"scenario", r.name},
                         {"l1", num(r.cost[0])},
                         {"l2", num(r.cost[1])},
                         {"l3", num(r.cost[2])},
                         {"max_relative_difference", num(r.max_relative_difference)},
                         {"pass", r.pass}});
  }
  j["seconds"] = report.seconds;
  return j.dump(2) + "\n";
}

}  // namespace strata
