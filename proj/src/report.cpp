#include "strata/report.hpp"

#include <cmath>
#include <limits>

#include <json.hpp>

#include "strata/actions.hpp"
#include "strata/robot.hpp"

namespace strata {

namespace {

using Json = nlohmann::ordered_json;

Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

std::string level_name(Level l) { return "L" + std::to_string(as_int(l)); }

Json steps_json(const Path& path, const Lattice& lattice) {
  Json steps = Json::array();
  for (std::size_t i = 0; i < path.steps.size(); ++i) {
    const PathStep& s = path.steps[i];
    steps.push_back({{"index", i},
                     {"level", level_name(s.pose.level)},
                     {"pose", format_pose(s.pose, lattice)},
                     {"maneuver", i == 0 ? "start" : to_string(s.label)},
                     {"cost", s.cost},
                     {"accumulated", s.accumulated}});
  }
  return steps;
}

Json segments_json(const Path& path) {
  Json segs = Json::array();
  for (const Segment& g : path.segments) {
    double cost = 0.0;
    for (std::size_t i = g.first; i <= g.last; ++i) cost += i == 0 ? 0.0 : path.steps[i].cost;
    segs.push_back({{"level", level_name(g.level)}, {"first", g.first}, {"last", g.last}, {"cost", cost}});
  }
  return segs;
}

}  // namespace

std::string path_json(const PlanResult& r, const Pose& start, const Pose& goal, const Lattice& lattice,
                      bool include_timing) {
  Json j;
  j["schema_version"] = kPathSchemaVersion;
  j["start"] = format_pose(start, lattice);
  j["goal"] = format_pose(goal, lattice);
  j["found"] = r.found;
  j["total_cost"] = r.found ? number(r.path.total_cost) : Json(nullptr);
  j["steps"] = steps_json(r.path, lattice);
  j["segments"] = segments_json(r.path);
  Json iters = Json::array();
  for (const IterationStats& it : r.stats.iterations)
    iters.push_back({{"weight", it.weight}, {"cost", number(it.cost)}, {"expansions", it.expansions}});
  j["stats"] = {{"expansions", r.stats.expansions},
                {"generated", r.stats.generated},
                {"iterations", iters},
                {"reused_search_effort", r.stats.reused_search_effort},
                {"budget_exhausted", r.stats.budget_exhausted}};
  if (include_timing) {
    Json per = Json::array();
    for (const IterationStats& it : r.stats.iterations) per.push_back(it.seconds);
    j["timing"] = {{"heuristic_seconds", r.stats.heuristic_seconds},
                   {"search_seconds", r.stats.search_seconds},
                   {"iteration_seconds", per}};
  }
  return j.dump(2) + "\n";
}

std::string refine_report_json(const Path& original, const RefinedPath& refined, const Lattice& lattice) {
  Json j;
  j["schema_version"] = kPathSchemaVersion;
  j["complete"] = refined.complete;
  j["not_refineable"] = refined.not_refineable;
  j["estimated_cost"] = original.total_cost;
  j["refined_cost"] = refined.complete ? number(refined.path.total_cost) : Json(nullptr);
  Json segs = Json::array();
  for (const SegmentReport& s : refined.segments) {
    const double rel = s.original_cost > 0.0 ? std::abs(s.refined_cost - s.original_cost) / s.original_cost : 0.0;
    segs.push_back({{"from", level_name(s.from_level)},
                    {"first", s.first_step},
                    {"last", s.last_step},
                    {"original_cost", s.original_cost},
                    {"refined_cost", s.refined_cost},
                    {"relative_difference", s.verdict == Verdict::refineable || s.verdict == Verdict::cost_deviation
                                                ? number(rel)
                                                : Json(nullptr)},
                    {"verdict", to_string(s.verdict)}});
  }
  j["segments"] = segs;
  j["steps"] = steps_json(refined.path, lattice);
  return j.dump(2) + "\n";
}

void write_path_overlay(const std::filesystem::path& file, const LevelMaps& maps, const Path& path,
                        const RobotGeometry& robot) {
  HeightGrid img = maps.l1.height;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (float v : img.cells())
    if (std::isfinite(v)) {
      lo = std::min(lo, double(v));
      hi = std::max(hi, double(v));
    }
  if (!(hi > lo)) {
    lo = 0.0;
    hi = 1.0;
  }
  // Keep terrain off the reserved end values.
  for (float& v : img.cells())
    if (std::isnan(v)) v = static_cast<float>(lo);
  for (const PathStep& s : path.steps) {
    const GridIndex c = img.index_of(maps.lattice.world(s.pose));
    if (img.in_bounds(c)) img[c] = kInfinity;
    if (s.pose.level != Level::l1) continue;
    for (const WorldPoint& f : foot_positions(maps.lattice, s.pose, robot)) {
      const GridIndex g = img.index_of(f);
      if (img.in_bounds(g)) img[g] = kUnknown;
    }
  }
  write_pgm(file, img, lo, hi, {"overlay: 255 = path base positions, 0 = Level-1 foot contacts"});
}

}  // namespace strata
