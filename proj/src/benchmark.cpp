#include "strata/benchmark.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>
#include <sstream>

#include <json.hpp>

#include "strata/levels.hpp"
#include "strata/refine.hpp"
#include "strata/search.hpp"

namespace strata {

std::vector<Scenario> benchmark_suite(const std::string& name) {
  std::vector<Scenario> out;
  auto add = [&](const char* kind) { out.push_back(generate_scenario(kind)); };
  if (name == "small" || name == "all")
    for (const char* k : {"flat", "corridor", "stairs", "bar", "clutter"}) add(k);
  if (name == "composite" || name == "all") add("composite");
  if (name == "maze") add("maze");
  if (out.empty()) throw ContractError("unknown benchmark suite '" + name + "'");
  return out;
}

std::vector<BenchmarkCell> run_benchmark(const std::vector<Scenario>& suite, const PlannerConfig& base,
                                         const BenchmarkGrid& grid) {
  std::vector<BenchmarkCell> cells;
  for (const Scenario& sc : suite) {
    const LevelMaps maps = build_levels(sc.map, base);
    const Pose start = parse_pose(sc.start, maps.lattice);
    const Pose goal = parse_pose(sc.goal, maps.lattice);
    std::unique_ptr<DijkstraField> field;
    for (HeuristicKind h : grid.heuristics) {
      if (h == HeuristicKind::dijkstra && !field) field = std::make_unique<DijkstraField>(maps, goal, base);
      for (LevelMode mode : grid.modes)
        for (double w : grid.weights) {
          PlannerConfig cfg = base;
          cfg.mode = mode;
          cfg.heuristic = h;
          cfg.weights = {w};
          BenchmarkCell cell;
          cell.scenario = sc.name;
          cell.mode = mode;
          cell.weight = w;
          cell.heuristic = h;
          const PlanResult r = plan(maps, start, goal, cfg, h == HeuristicKind::dijkstra ? field.get() : nullptr);
          cell.found = r.found;
          cell.budget_exhausted = r.stats.budget_exhausted;
          cell.heuristic_seconds = h == HeuristicKind::dijkstra ? field->seconds() : 0.0;
          cell.search_seconds = r.stats.search_seconds;
          cell.expansions = r.stats.expansions;
          cell.estimated_cost = r.found ? r.path.total_cost : std::numeric_limits<double>::infinity();
          cell.refined_cost = std::numeric_limits<double>::quiet_NaN();
          if (r.found) {
            const RefinedPath rp = refine_path_to_l1(maps, r.path, cfg);
            cell.not_refineable = rp.not_refineable;
            if (rp.complete) cell.refined_cost = rp.path.total_cost;
          }
          cells.push_back(cell);
        }
    }
  }
  return cells;
}

std::string format_benchmark(const std::vector<BenchmarkCell>& cells) {
  std::ostringstream out;
  char buf[200];
  std::snprintf(buf, sizeof buf, "%-10s %-9s %5s %-9s %9s %9s %10s %10s %10s %4s\n", "scenario", "mode", "W",
                "heuristic", "prep s", "search s", "expansions", "estimated", "refined", "nr");
  out << buf;
  for (const BenchmarkCell& c : cells) {
    std::snprintf(buf, sizeof buf, "%-10s %-9s %5.2f %-9s %9.3f %9.3f %10zu %10.3f %10.3f %4zu%s\n",
                  c.scenario.c_str(), to_string(c.mode).c_str(), c.weight, to_string(c.heuristic).c_str(),
                  c.heuristic_seconds, c.search_seconds, c.expansions, c.estimated_cost, c.refined_cost,
                  c.not_refineable, c.budget_exhausted ? "  (budget)" : "");
    out << buf;
  }
  return out.str();
}

std::string benchmark_json(const std::vector<BenchmarkCell>& cells) {
  using Json = nlohmann::ordered_json;
  auto num = [](double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); };
  Json rows = Json::array();
  for (const BenchmarkCell& c : cells)
    rows.push_back({{"scenario", c.scenario},
                    {"mode", to_string(c.mode)},
                    {"weight", c.weight},
                    {"heuristic", to_string(c.heuristic)},
                    {"found", c.found},
                    {"budget_exhausted", c.budget_exhausted},
                    {"heuristic_seconds", c.heuristic_seconds},
                    {"search_seconds", c.search_seconds},
                    {"expansions", c.expansions},
                    {"estimated_cost", num(c.estimated_cost)},
                    {"refined_cost", num(c.refined_cost)},
                    {"not_refineable", c.not_refineable}});
  return Json{{"cells", rows}}.dump(2) + "\n";
}

}  // namespace strata
