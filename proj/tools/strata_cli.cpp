#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "strata/benchmark.hpp"
#include "strata/calibration.hpp"
#include "strata/config_io.hpp"
#include "strata/levels.hpp"
#include "strata/refine.hpp"
#include "strata/report.hpp"
#include "strata/scenario.hpp"
#include "strata/search.hpp"

namespace fs = std::filesystem;
using namespace strata;

namespace {

enum Exit { ok = 0, failed = 1, unreachable = 2, invalid = 3, not_refineable = 4, replan_bound = 5 };

// Files written by the running command; removed again if it fails.
std::vector<fs::path> g_outputs;

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  g_outputs.push_back(path);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

void remove_outputs() {
  std::error_code ec;
  for (const fs::path& p : g_outputs) {
    fs::remove(p, ec);
    fs::path side = p;
    side += ".txt";
    fs::remove(side, ec);
  }
  g_outputs.clear();
}

struct ConfigOptions {
  std::string file;
  std::vector<std::string> sets;
  std::vector<double> weights;
  std::string heuristic;
  std::string mode;
  double level1_window = 0.0;
  double level2_window = 0.0;
  double time_budget = 0.0;

  void add_to(CLI::App* app) {
    app->add_option("--config", file, "key = value config file")->check(CLI::ExistingFile);
    app->add_option("--set", sets, "override one config key (key=value), repeatable");
    app->add_option("--weight", weights, "weight schedule, highest first (repeatable)");
    app->add_option("--heuristic", heuristic, "euclidean or dijkstra");
    app->add_option("--mode", mode, "combined, l1, l2 or l3");
    app->add_option("--level1-window", level1_window, "Level-1 window side (m)");
    app->add_option("--level2-window", level2_window, "Level-2 window side (m)");
    app->add_option("--time-budget", time_budget, "planning time budget (s)");
  }

  PlannerConfig build() const {
    PlannerConfig cfg = file.empty() ? PlannerConfig{} : load_config(file);
    for (const std::string& s : sets) {
      const auto eq = s.find('=');
      if (eq == std::string::npos) throw ContractError("--set expects key=value, got '" + s + "'");
      set_config_value(cfg, s.substr(0, eq), s.substr(eq + 1));
    }
    if (!weights.empty()) cfg.weights = weights;
    if (!heuristic.empty()) cfg.heuristic = parse_heuristic(heuristic);
    if (!mode.empty()) cfg.mode = parse_level_mode(mode);
    if (level1_window > 0.0) cfg.level1_window = level1_window;
    if (level2_window > 0.0) cfg.level2_window = level2_window;
    if (time_budget > 0.0) cfg.time_budget = time_budget;
    cfg.validate();
    return cfg;
  }
};

struct Query {
  Scenario scenario;
  LevelMaps maps;
  Pose start;
  Pose goal;
};

Query load_query(const std::string& scn, const PlannerConfig& cfg) {
  Query q;
  q.scenario = load_scenario(scn);
  q.maps = build_levels(q.scenario.map, cfg);
  q.start = parse_pose(q.scenario.start, q.maps.lattice);
  q.goal = parse_pose(q.scenario.goal, q.maps.lattice);
  if (!q.maps.lattice.contains(q.start) || !q.maps.lattice.contains(q.goal))
    throw ContractError("start or goal outside the map");
  return q;
}

ParamMap parse_params(const std::vector<std::string>& items) {
  ParamMap out;
  for (const std::string& s : items) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ContractError("--param expects key=value, got '" + s + "'");
    out[s.substr(0, eq)] = s.substr(eq + 1);
  }
  return out;
}

int cmd_gen(const std::string& kind, const std::vector<std::string>& params, const std::string& name,
            const std::string& seed, const std::string& out_dir) {
  ParamMap p = parse_params(params);
  if (!name.empty()) p["name"] = name;
  if (!seed.empty()) p["seed"] = seed;
  const Scenario s = generate_scenario(kind, p);
  const fs::path dir(out_dir);
  g_outputs.push_back(dir / (s.name + ".hmap"));
  g_outputs.push_back(dir / (s.name + ".scn"));
  std::cout << save_scenario(s, dir).string() << "\n";
  return ok;
}

int cmd_plan(const std::string& scn, const PlannerConfig& cfg, const std::string& out, const std::string& overlay,
             bool timing) {
  const Query q = load_query(scn, cfg);
  const PlanResult r = plan(q.maps, q.start, q.goal, cfg);
  if (!r.found) {
    std::cerr << "goal unreachable (" << r.stats.expansions << " expansions)\n";
    return unreachable;
  }
  const std::string doc = path_json(r, q.start, q.goal, q.maps.lattice, timing);
  if (out.empty()) std::cout << doc;
  else write_file(out, doc);
  if (!overlay.empty()) {
    g_outputs.push_back(overlay);
    write_path_overlay(overlay, q.maps, r.path, cfg.robot);
  }
  std::cerr << "cost " << r.path.total_cost << ", " << r.stats.expansions << " expansions, "
            << r.stats.search_seconds << " s search, " << r.stats.heuristic_seconds << " s heuristic\n";
  return ok;
}

int cmd_classify(const std::string& scn, const PlannerConfig& cfg, const std::string& out_dir) {
  const Query q = load_query(scn, cfg);
  const fs::path dir(out_dir);
  fs::create_directories(dir);
  const Level3Rep& l3 = q.maps.l3;
  const TerrainClassGrid& tc = l3.classes;

  std::vector<float> classes(tc.classes.size());
  std::vector<float> alpha(tc.classes.size());
  for (std::size_t i = 0; i < classes.size(); ++i) {
    classes[i] = static_cast<float>(static_cast<int>(tc.classes[i]));
    alpha[i] = std::isnan(tc.alpha[i]) ? kUnknown : static_cast<float>(tc.alpha[i] * 180.0 / M_PI);
  }
  std::vector<std::string> legend;
  for (int c = 0; c <= 4; ++c)
    legend.push_back("gray " + std::to_string(1 + static_cast<int>(std::lround(c / 4.0 * 253.0))) + " = " +
                     to_string(static_cast<TerrainClass>(c)));
  const fs::path cls = dir / "classes.pgm";
  const fs::path alp = dir / "step_orientation.pgm";
  const fs::path cc = dir / "l3_cell_cost.pgm";
  const fs::path fc = dir / "l1_foot_cost.pgm";
  for (const fs::path& p : {cls, alp, cc, fc}) g_outputs.push_back(p);
  write_pgm(cls, classes, tc.width, tc.height, 0.0, 4.0, legend);
  write_pgm(alp, alpha, tc.width, tc.height, 0.0, 180.0, {"step orientation in degrees; 0 = not a step cell"});
  write_pgm(cc, l3.cell_cost, 0.0, cfg.costs.step_cell_base + cfg.costs.step_cell_slope,
            {"Level-3 cell cost; 255 = wall"});
  write_pgm(fc, q.maps.l1.foot_cost, 1.0, 6.0, {"Level-1 foot cost; 255 = not drivable"});

  std::size_t count[5] = {};
  for (TerrainClass c : tc.classes) ++count[static_cast<int>(c)];
  for (int c = 0; c <= 4; ++c) std::cout << to_string(static_cast<TerrainClass>(c)) << " " << count[c] << "\n";
  return ok;
}

int cmd_refine(const std::string& scn, const PlannerConfig& cfg, const std::string& out) {
  const Query q = load_query(scn, cfg);
  const PlanResult r = plan(q.maps, q.start, q.goal, cfg);
  if (!r.found) {
    std::cerr << "goal unreachable\n";
    return unreachable;
  }
  const RefinedPath rp = refine_path_to_l1(q.maps, r.path, cfg);
  const std::string doc = refine_report_json(r.path, rp, q.maps.lattice);
  if (out.empty()) std::cout << doc;
  else write_file(out, doc);
  std::cerr << "estimated " << r.path.total_cost << ", refined "
            << (rp.complete ? std::to_string(rp.path.total_cost) : std::string("-")) << ", " << rp.segments.size()
            << " segments, " << rp.not_refineable << " not refineable\n";
  return rp.complete ? ok : not_refineable;
}

int cmd_simulate(const std::string& scn, const PlannerConfig& cfg, const std::string& initial,
                 const std::string& out, std::size_t max_steps) {
  const Query q = load_query(scn, cfg);
  HeightGrid initial_map;
  ExecutionOptions opt;
  opt.max_steps = max_steps;
  if (!initial.empty()) {
    initial_map = load_height_map(initial);
    opt.initial_map = &initial_map;
  }
  const ExecutionResult r = simulate_execution(q.scenario.map, q.start, q.goal, cfg, opt);
  const std::string log = execution_log_jsonl(r, q.maps.lattice);
  if (out.empty()) std::cout << log;
  else write_file(out, log);
  std::cerr << (r.reached_goal ? "goal reached" : "goal not reached") << ", " << r.replans << " re-plans, "
            << r.executed.steps.size() - 1 << " maneuvers, cost " << r.executed.total_cost << "\n";
  if (r.reached_goal) return ok;
  if (r.replans > cfg.max_replans) return replan_bound;
  return unreachable;
}

int cmd_benchmark(const std::string& suite, const PlannerConfig& cfg, const std::vector<std::string>& modes,
                  const std::vector<double>& weights, const std::vector<std::string>& heuristics,
                  const std::string& json_out) {
  BenchmarkGrid grid;
  if (!modes.empty()) {
    grid.modes.clear();
    for (const auto& m : modes) grid.modes.push_back(parse_level_mode(m));
  }
  if (!weights.empty()) grid.weights = weights;
  if (!heuristics.empty()) {
    grid.heuristics.clear();
    for (const auto& h : heuristics) grid.heuristics.push_back(parse_heuristic(h));
  }
  const auto cells = run_benchmark(benchmark_suite(suite), cfg, grid);
  std::cout << format_benchmark(cells);
  if (!json_out.empty()) write_file(json_out, benchmark_json(cells));
  return ok;
}

int cmd_calibrate(const PlannerConfig& cfg, const std::string& json_out) {
  const CalibrationReport report = calibrate(cfg);
  std::cout << format_calibration(report);
  if (!json_out.empty()) write_file(json_out, calibration_json(report));
  return report.pass ? ok : failed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-level planner for hybrid driving-stepping locomotion"};
  app.require_subcommand(1);
  int code = ok;

  auto* gen = app.add_subcommand("gen", "generate a synthetic scenario (.scn + .hmap)");
  std::string kind, name, seed, out_dir = ".";
  std::vector<std::string> params;
  gen->add_option("kind", kind, "flat, rough, corridor, bar, stairs, ramp, clutter, composite, maze, wall")
      ->required();
  gen->add_option("--param", params, "generator parameter key=value, repeatable");
  gen->add_option("--name", name, "scenario name (file stem)");
  gen->add_option("--seed", seed, "random seed for rough, clutter and maze");
  gen->add_option("--out-dir", out_dir, "output directory");

  ConfigOptions copt;
  std::string scn, out, overlay, initial, suite = "small", json_out;
  bool no_timing = false;
  std::size_t max_steps = 0;
  std::vector<std::string> modes, heuristics;
  std::vector<double> bench_weights;

  auto* plan_cmd = app.add_subcommand("plan", "plan a path and write it as JSON");
  plan_cmd->add_option("--scenario", scn, "scenario file")->required()->check(CLI::ExistingFile);
  plan_cmd->add_option("--out", out, "path JSON (default: stdout)");
  plan_cmd->add_option("--overlay", overlay, "graymap of the path over the height map");
  plan_cmd->add_flag("--no-timing", no_timing, "omit the timing block");
  copt.add_to(plan_cmd);

  auto* classify = app.add_subcommand("classify", "write terrain class and cost rasters");
  classify->add_option("--scenario", scn, "scenario file")->required()->check(CLI::ExistingFile);
  classify->add_option("--out-dir", out_dir, "output directory");
  copt.add_to(classify);

  auto* refine = app.add_subcommand("refine", "plan, refine every coarse segment to Level 1 and report");
  refine->add_option("--scenario", scn, "scenario file")->required()->check(CLI::ExistingFile);
  refine->add_option("--out", out, "report JSON (default: stdout)");
  copt.add_to(refine);

  auto* simulate = app.add_subcommand("simulate", "execute with continuous refinement and write an event log");
  simulate->add_option("--scenario", scn, "scenario file (its map is the ground truth)")
      ->required()
      ->check(CLI::ExistingFile);
  simulate->add_option("--initial-map", initial, "height map known before moving (default: ground truth)")
      ->check(CLI::ExistingFile);
  simulate->add_option("--out", out, "JSONL event log (default: stdout)");
  simulate->add_option("--max-steps", max_steps, "maneuver limit (0: automatic)");
  copt.add_to(simulate);

  auto* bench = app.add_subcommand("benchmark", "level modes x weights x heuristics table");
  bench->add_option("--suite", suite, "small, composite, maze or all");
  bench->add_option("--modes", modes, "subset of l1 l2 l3 combined");
  bench->add_option("--weights", bench_weights, "weights (default 1.5 1.25)");
  bench->add_option("--heuristics", heuristics, "subset of dijkstra euclidean");
  bench->add_option("--json", json_out, "also write the table as JSON");
  copt.add_to(bench);

  auto* calib = app.add_subcommand("calibrate", "compare maneuver costs across the three levels");
  calib->add_option("--json", json_out, "also write the table as JSON");
  copt.add_to(calib);

  auto* config = app.add_subcommand("config", "print the effective configuration");
  copt.add_to(config);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? ok : invalid;
  }

  try {
    if (*gen) code = cmd_gen(kind, params, name, seed, out_dir);
    else if (*plan_cmd) code = cmd_plan(scn, copt.build(), out, overlay, !no_timing);
    else if (*classify) code = cmd_classify(scn, copt.build(), out_dir);
    else if (*refine) code = cmd_refine(scn, copt.build(), out);
    else if (*simulate) code = cmd_simulate(scn, copt.build(), initial, out, max_steps);
    else if (*bench) code = cmd_benchmark(suite, copt.build(), modes, bench_weights, heuristics, json_out);
    else if (*calib) code = cmd_calibrate(copt.build(), json_out);
    else if (*config) std::cout << format_config(copt.build());
  } catch (const ContractError& e) {
    std::cerr << "error: " << e.what() << "\n";
    code = invalid;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    code = invalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    code = invalid;
  }
  if (code == invalid) remove_outputs();
  return code;
}
