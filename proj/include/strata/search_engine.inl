// Anytime search engine; included from search.hpp.
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

namespace strata {

namespace detail {

struct SearchNode {
  std::uint64_t key = 0;
  double g = std::numeric_limits<double>::infinity();
  float h = 0.0f;
  float pose_cost = 0.0f;
  double edge_cost = 0.0;
  float snap_cost = 0.0f;
  std::int32_t parent = -1;
  ActionId action;
  std::uint8_t flags = 0;
  std::uint16_t closed_iter = 0;
};

enum : std::uint8_t { kInOpen = 1, kIncons = 2, kPromotedEdge = 4 };

struct HeapEntry {
  double f;
  double g;
  std::uint32_t idx;
};

// std heap is a max-heap; "less" means lower priority. Smaller f first, then
// larger g, then smaller index.
struct HeapLess {
  bool operator()(const HeapEntry& a, const HeapEntry& b) const {
    if (a.f != b.f) return a.f > b.f;
    if (a.g != b.g) return a.g < b.g;
    return a.idx > b.idx;
  }
};

}  // namespace detail

template <class Problem>
SearchOutcome anytime_search(Problem& problem, const Pose& start, double start_cost, const SearchLimits& limits) {
  using clock = std::chrono::steady_clock;
  using detail::HeapEntry;
  using detail::SearchNode;
  constexpr double kInf = std::numeric_limits<double>::infinity();

  const auto t0 = clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(clock::now() - t0).count(); };

  SearchOutcome out;
  std::vector<SearchNode> nodes;
  absl::flat_hash_map<std::uint64_t, std::uint32_t> index;
  std::vector<HeapEntry> heap;
  std::vector<std::uint32_t> incons;
  std::vector<Edge> edges;
  detail::HeapLess less;

  auto node_for = [&](const Pose& p) -> std::uint32_t {
    const std::uint64_t key = pack(p);
    auto [it, fresh] = index.try_emplace(key, static_cast<std::uint32_t>(nodes.size()));
    if (fresh) {
      SearchNode n;
      n.key = key;
      n.h = static_cast<float>(problem.heuristic(p));
      nodes.push_back(n);
    }
    return it->second;
  };

  const std::uint32_t s = node_for(start);
  nodes[s].g = 0.0;
  nodes[s].pose_cost = static_cast<float>(start_cost);
  if (!std::isfinite(nodes[s].h)) nodes[s].h = 0.0f;

  std::int64_t best_goal = -1;
  double g_goal = kInf;
  if (problem.is_goal(start)) {
    best_goal = s;
    g_goal = 0.0;
  }
  nodes[s].flags |= detail::kInOpen;

  bool stop = false;
  for (std::size_t it = 0; it < limits.weights.size() && !stop; ++it) {
    const double w = limits.weights[it];
    const auto t_iter = elapsed();
    const std::size_t exp_before = out.stats.expansions;
    const auto stamp = static_cast<std::uint16_t>(it + 1);

    for (std::uint32_t i : incons) {
      nodes[i].flags = static_cast<std::uint8_t>((nodes[i].flags & ~detail::kIncons) | detail::kInOpen);
    }
    incons.clear();
    heap.clear();
    for (std::uint32_t i = 0; i < nodes.size(); ++i)
      if (nodes[i].flags & detail::kInOpen) heap.push_back({nodes[i].g + w * nodes[i].h, nodes[i].g, i});
    std::make_heap(heap.begin(), heap.end(), less);

    while (!heap.empty()) {
      const HeapEntry top = heap.front();
      SearchNode& n0 = nodes[top.idx];
      if (!(n0.flags & detail::kInOpen) || top.g != n0.g) {
        std::pop_heap(heap.begin(), heap.end(), less);
        heap.pop_back();
        continue;
      }
      if (g_goal <= top.f) break;
      std::pop_heap(heap.begin(), heap.end(), less);
      heap.pop_back();
      n0.flags &= static_cast<std::uint8_t>(~detail::kInOpen);
      n0.closed_iter = stamp;
      const std::uint32_t u = top.idx;
      const double gu = n0.g;
      const Pose pu = unpack(n0.key);
      const double cu = n0.pose_cost;

      ++out.stats.expansions;
      if ((out.stats.expansions & 255) == 0 &&
          (elapsed() > limits.time_budget || out.stats.expansions >= limits.max_expansions)) {
        out.stats.budget_exhausted = true;
        stop = true;
        break;
      }

      edges.clear();
      problem.expand(pu, cu, edges);
      for (const Edge& e : edges) {
        ++out.stats.generated;
        const std::uint32_t v = node_for(e.target);
        SearchNode& nv = nodes[v];
        const double ng = gu + e.cost;
        if (!(ng < nv.g)) continue;
        nv.g = ng;
        nv.parent = static_cast<std::int32_t>(u);
        nv.pose_cost = static_cast<float>(e.target_cost);
        nv.edge_cost = e.cost;
        nv.snap_cost = e.snap_cost;
        nv.action = e.action;
        nv.flags = static_cast<std::uint8_t>(e.promoted ? (nv.flags | detail::kPromotedEdge)
                                                        : (nv.flags & ~detail::kPromotedEdge));
        if (ng < g_goal && problem.is_goal(e.target)) {
          g_goal = ng;
          best_goal = v;
        }
        if (!std::isfinite(nv.h)) continue;
        if (nv.closed_iter == stamp) {
          if (!(nv.flags & detail::kIncons)) {
            nv.flags |= detail::kIncons;
            incons.push_back(v);
          }
        } else {
          nv.flags |= detail::kInOpen;
          heap.push_back({ng + w * nv.h, ng, v});
          std::push_heap(heap.begin(), heap.end(), less);
        }
      }
    }

    IterationStats is;
    is.weight = w;
    is.cost = g_goal;
    is.seconds = elapsed() - t_iter;
    is.expansions = out.stats.expansions - exp_before;
    out.stats.iterations.push_back(is);
    if (best_goal < 0 && heap.empty() && incons.empty()) break;  // graph exhausted
  }
  out.stats.search_seconds = elapsed();

  if (best_goal >= 0) {
    out.found = true;
    for (std::int64_t i = best_goal; i >= 0; i = nodes[i].parent) {
      const SearchNode& n = nodes[i];
      ChainLink link;
      link.pose = unpack(n.key);
      link.action = n.action;
      link.edge_cost = n.edge_cost;
      link.snap_cost = n.snap_cost;
      link.promoted = (n.flags & detail::kPromotedEdge) != 0;
      link.g = n.g;
      out.chain.push_back(link);
    }
    std::reverse(out.chain.begin(), out.chain.end());
  }
  return out;
}

}  // namespace strata
