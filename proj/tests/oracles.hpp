#pragma once

#include <cmath>
#include <queue>
#include <random>
#include <vector>

#include <absl/container/flat_hash_map.h>

#include "strata/actions.hpp"
#include "strata/levels.hpp"
#include "strata/robot.hpp"

namespace strata::oracle {

// Plain Dijkstra over the Level-1 maneuver graph. Goal: base pose matches,
// feet free. Returns +inf when unreachable.
inline double level1_optimum(const LevelMaps& maps, const Pose& start, const Pose& goal, const PlannerConfig& cfg) {
  using Item = std::pair<double, std::uint64_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
  absl::flat_hash_map<std::uint64_t, double> dist;
  dist[pack(start)] = 0.0;
  open.push({0.0, pack(start)});
  std::vector<Maneuver> out;
  while (!open.empty()) {
    const auto [d, key] = open.top();
    open.pop();
    if (d > dist.find(key)->second) continue;
    const Pose p = unpack(key);
    if (p.x == goal.x && p.y == goal.y && p.theta == goal.theta) return d;
    out.clear();
    successors(maps, p, pose_cost(maps, p, cfg.robot), cfg, out);
    for (const Maneuver& mv : out) {
      const std::uint64_t k = pack(mv.target);
      const double nd = d + mv.cost;
      const auto [it, fresh] = dist.try_emplace(k, nd);
      if (fresh || nd < it->second) {
        it->second = nd;
        open.push({nd, k});
      }
    }
  }
  return std::numeric_limits<double>::infinity();
}

// Small random terrain: gentle bumps, a few steppable blocks and sometimes
// a tall one.
inline HeightGrid random_small_map(std::mt19937& rng, int width, int height) {
  HeightGrid g(width, height, 0.025, {0, 0}, 0.0f);
  std::uniform_real_distribution<double> bump(0.0, 0.008);
  for (float& v : g.cells()) v = static_cast<float>(bump(rng));
  std::uniform_int_distribution<int> blocks(0, 3), bx(0, width - 4), by(0, height - 4), size(2, 6);
  std::uniform_real_distribution<double> rise(0.06, 0.25);
  const int n = blocks(rng);
  for (int b = 0; b < n; ++b) {
    const int c0 = bx(rng), r0 = by(rng), w = size(rng), h = size(rng);
    const float top = static_cast<float>(b == 2 ? 0.7 : rise(rng));
    for (int r = r0; r < std::min(height, r0 + h); ++r)
      for (int c = c0; c < std::min(width, c0 + w); ++c) g[{c, r}] = top;
  }
  return g;
}

}  // namespace strata::oracle
