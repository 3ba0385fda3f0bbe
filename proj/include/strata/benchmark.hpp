#pragma once

#include <string>
#include <vector>

#include "strata/config.hpp"
#include "strata/scenario.hpp"

namespace strata {

struct BenchmarkCell {
  std::string scenario;
  LevelMode mode = LevelMode::combined;
  double weight = 1.0;
  HeuristicKind heuristic = HeuristicKind::euclidean;
  bool found = false;
  bool budget_exhausted = false;
  double heuristic_seconds = 0.0;
  double search_seconds = 0.0;
  std::size_t expansions = 0;
  double estimated_cost = 0.0;  // planner path cost (mixed levels)
  double refined_cost = 0.0;    // after refinement to Level 1; NaN if not refineable
  std::size_t not_refineable = 0;
};

/// "small": flat, corridor, stairs, bar, clutter. "composite": the 20 x 20 m
/// composite map. "maze": a maze-like map. "all": small plus composite.
std::vector<Scenario> benchmark_suite(const std::string& name);

struct BenchmarkGrid {
  std::vector<LevelMode> modes{LevelMode::l1_only, LevelMode::l2_only, LevelMode::l3_only, LevelMode::combined};
  std::vector<double> weights{1.5, 1.25};
  std::vector<HeuristicKind> heuristics{HeuristicKind::dijkstra, HeuristicKind::euclidean};
};

/// One planning query per scenario x mode x weight x heuristic; each runs a
/// single weighted A* iteration at that weight. The Dijkstra field is built
/// once per scenario and counted in every cell that uses it.
std::vector<BenchmarkCell> run_benchmark(const std::vector<Scenario>& suite, const PlannerConfig& base,
                                         const BenchmarkGrid& grid = {});

std::string format_benchmark(const std::vector<BenchmarkCell>& cells);
std::string benchmark_json(const std::vector<BenchmarkCell>& cells);

}  // namespace strata
