#include "strata/levels.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>

namespace strata {

namespace {

constexpr double kPi = std::numbers::pi;

// Summed-area table over known cells: sum of values and count of knowns.
struct Integral {
  int w = 0;
  int h = 0;
  std::vector<double> sum;
  std::vector<int> count;

  template <class Tag>
  explicit Integral(const Grid<Tag>& g)
      : w(g.width()), h(g.height()), sum((w + 1) * std::size_t(h + 1), 0.0),
        count((w + 1) * std::size_t(h + 1), 0) {
    for (int r = 0; r < h; ++r) {
      for (int c = 0; c < w; ++c) {
        const float v = g[{c, r}];
        const bool k = !std::isnan(v);
        at(sum, c + 1, r + 1) = (k ? v : 0.0) + at(sum, c, r + 1) + at(sum, c + 1, r) - at(sum, c, r);
        at(count, c + 1, r + 1) = int(k) + at(count, c, r + 1) + at(count, c + 1, r) - at(count, c, r);
      }
    }
  }

  template <class T>
  T& at(std::vector<T>& v, int c, int r) {
    return v[static_cast<std::size_t>(r) * (w + 1) + c];
  }
  template <class T>
  T at(const std::vector<T>& v, int c, int r) const {
    return v[static_cast<std::size_t>(r) * (w + 1) + c];
  }

  // Inclusive rectangle, clipped to the grid.
  std::pair<double, int> box(int c0, int r0, int c1, int r1) const {
    c0 = std::max(c0, 0);
    r0 = std::max(r0, 0);
    c1 = std::min(c1, w - 1);
    r1 = std::min(r1, h - 1);
    if (c0 > c1 || r0 > r1) return {0.0, 0};
    const double s = at(sum, c1 + 1, r1 + 1) - at(sum, c0, r1 + 1) - at(sum, c1 + 1, r0) + at(sum, c0, r0);
    const int n = at(count, c1 + 1, r1 + 1) - at(count, c0, r1 + 1) - at(count, c1 + 1, r0) + at(count, c0, r0);
    return {s, n};
  }
};

// Sliding maximum along one axis with window [i-k, i+k]; NaN is ignored
// (treated as -inf).
void sliding_max(const std::vector<float>& in, std::vector<float>& out, int n, int stride,
                 std::size_t base, int k) {
  std::deque<int> dq;
  auto value = [&](int i) {
    const float v = in[base + static_cast<std::size_t>(i) * stride];
    return std::isnan(v) ? -kInfinity : v;
  };
  int next = 0;
  for (int i = 0; i < n; ++i) {
    const int hi = std::min(n - 1, i + k);
    for (; next <= hi; ++next) {
      const float v = value(next);
      while (!dq.empty() && value(dq.back()) <= v) dq.pop_back();
      dq.push_back(next);
    }
    while (dq.front() < i - k) dq.pop_front();
    out[base + static_cast<std::size_t>(i) * stride] = value(dq.front());
  }
}

// Interior cells of the digital segment from a to b (Bresenham), endpoints
// excluded.
template <class F>
bool walk_interior(GridIndex a, GridIndex b, F&& visit) {
  int x = a.col;
  int y = a.row;
  const int dx = std::abs(b.col - a.col);
  const int dy = -std::abs(b.row - a.row);
  const int sx = a.col < b.col ? 1 : -1;
  const int sy = a.row < b.row ? 1 : -1;
  int err = dx + dy;
  while (true) {
    const int e2 = 2 * err;
    if (e2 >= dy) {
      err += dy;
      x += sx;
    }
    if (e2 <= dx) {
      err += dx;
      y += sy;
    }
    if (x == b.col && y == b.row) return true;
    if (!visit(GridIndex{x, y})) return false;
  }
}

}  // namespace

const char* to_string(TerrainClass c) {
  switch (c) {
    case TerrainClass::flat: return "flat";
    case TerrainClass::rough: return "rough";
    case TerrainClass::step: return "step";
    case TerrainClass::wall: return "wall";
    case TerrainClass::unknown: return "unknown";
  }
  return "unknown";
}

std::vector<CellOffset> rect_cells(double length, double width, double lon, double lat,
                                   double heading, double resolution) {
  const double c = std::cos(heading);
  const double s = std::sin(heading);
  const double cx = c * lon - s * lat;
  const double cy = s * lon + c * lat;
  const double reach = 0.5 * std::hypot(length, width) + resolution;
  const int lo_x = static_cast<int>(std::floor((cx - reach) / resolution));
  const int hi_x = static_cast<int>(std::ceil((cx + reach) / resolution));
  const int lo_y = static_cast<int>(std::floor((cy - reach) / resolution));
  const int hi_y = static_cast<int>(std::ceil((cy + reach) / resolution));
  constexpr double eps = 1e-9;
  std::vector<CellOffset> out;
  for (int j = lo_y; j <= hi_y; ++j) {
    for (int i = lo_x; i <= hi_x; ++i) {
      const double px = i * resolution - cx;
      const double py = j * resolution - cy;
      const double u = c * px + s * py;
      const double v = -s * px + c * py;
      if (std::abs(u) <= 0.5 * length + eps && std::abs(v) <= 0.5 * width + eps) out.push_back({i, j});
    }
  }
  return out;
}

CircularMean circular_mean(std::span<const double> angles) {
  if (angles.empty()) throw ContractError("circular mean of no angles");
  double cs = 0.0;
  double sn = 0.0;
  for (double a : angles) {
    cs += std::cos(2.0 * a);
    sn += std::sin(2.0 * a);
  }
  CircularMean m;
  m.resultant = std::hypot(cs, sn) / static_cast<double>(angles.size());
  double a = 0.5 * std::atan2(sn, cs);
  if (a < 0.0) a += kPi;
  if (a >= kPi) a -= kPi;
  m.angle = a;
  return m;
}

double class_cost(TerrainClass c, double dh, const CostParams& costs) {
  switch (c) {
    case TerrainClass::flat: return costs.flat_cost;
    case TerrainClass::rough: return costs.rough_cost;
    case TerrainClass::step: return costs.step_cell_base + costs.step_cell_slope * (std::isnan(dh) ? 0.0 : dh);
    case TerrainClass::wall: return kInfinity;
    case TerrainClass::unknown: return kUnknown;
  }
  return kUnknown;
}

TerrainClass merge_classes(std::span<const TerrainClass> members) {
  std::array<int, 4> votes{};
  for (TerrainClass c : members)
    if (c != TerrainClass::unknown) ++votes[difficulty(c)];
  const int top = *std::max_element(votes.begin(), votes.end());
  if (top == 0) return TerrainClass::unknown;
  const int winners = static_cast<int>(std::count(votes.begin(), votes.end(), top));
  // A wall edge is two fine cells wide after subsampling; when it straddles a
  // block border the 2-2 tie must not erase it.
  if (top == 2 && votes[difficulty(TerrainClass::wall)] == 2) return TerrainClass::wall;
  if (winners == 1)
    return static_cast<TerrainClass>(std::max_element(votes.begin(), votes.end()) - votes.begin());
  for (int i = 0; i < 4; ++i)
    if (votes[i] > 0) return static_cast<TerrainClass>(i);
  return TerrainClass::unknown;
}

CostGrid body_cost_map(const HeightGrid& heights, const RobotGeometry& robot, const CostParams& costs) {
  const int w = heights.width();
  const int h = heights.height();
  const double res = heights.resolution();
  const int k = std::max(1, static_cast<int>(std::lround(0.5 * std::min(robot.base_length, robot.base_width) / res)));

  Integral integral(heights);
  std::vector<float> rowmax(heights.cells().begin(), heights.cells().end());
  std::vector<float> boxmax(rowmax.size());
  const std::vector<float> src(heights.cells().begin(), heights.cells().end());
  for (int r = 0; r < h; ++r) sliding_max(src, rowmax, w, 1, static_cast<std::size_t>(r) * w, k);
  for (int c = 0; c < w; ++c) sliding_max(rowmax, boxmax, h, w, static_cast<std::size_t>(c), k);

  CostGrid out(heights, kInfinity);
  const double span = (k + 1) * res;
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      const auto [s, n] = integral.box(c - k, r - k, c + k, r + k);
      if (n == 0) continue;
      const double mean = s / n;
      const double top = boxmax[static_cast<std::size_t>(r) * w + c];
      if (top - mean > robot.base_clearance) continue;
      auto half_mean = [&](int c0, int r0, int c1, int r1, bool& ok) {
        const auto [hs, hn] = integral.box(c0, r0, c1, r1);
        ok = ok && hn > 0;
        return hn > 0 ? hs / hn : 0.0;
      };
      bool okx = true;
      bool oky = true;
      const double gx = half_mean(c + 1, r - k, c + k, r + k, okx) - half_mean(c - k, r - k, c - 1, r + k, okx);
      const double gy = half_mean(c - k, r + 1, c + k, r + k, oky) - half_mean(c - k, r - k, c + k, r - 1, oky);
      const double sx = okx ? gx / span : 0.0;
      const double sy = oky ? gy / span : 0.0;
      out[{c, r}] = static_cast<float>(costs.slope_penalty * std::hypot(sx, sy));
    }
  }
  return out;
}

Level1Rep build_level1(const HeightGrid& heights, const PlannerConfig& cfg) {
  Level1Rep rep;
  rep.height = heights;
  rep.diff = height_diff_map(heights);
  rep.foot_cost = CostGrid(heights, kInfinity);
  const auto d = rep.diff.cells();
  auto fc = rep.foot_cost.cells();
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (!std::isnan(d[i]) && d[i] <= cfg.costs.drive_limit_l1 + kHeightEps)
      fc[i] = static_cast<float>(1.0 + cfg.costs.foot_cost_slope * d[i]);
  }
  rep.body_cost = body_cost_map(heights, cfg.robot, cfg.costs);
  return rep;
}

Level2Rep build_level2(const Level1Rep& l1, const PlannerConfig& cfg) {
  Level2Rep rep;
  rep.height = subsample(l1.height);
  rep.diff = subsample(l1.diff);
  rep.drive_limit = cfg.costs.drive_limit_l2;
  rep.body_cost = body_cost_map(rep.height, cfg.robot, cfg.costs);

  const RobotGeometry& g = cfg.robot;
  const double res = rep.height.resolution();
  const int n_theta = theta_count(Level::l2);
  rep.left_area.resize(n_theta);
  rep.right_area.resize(n_theta);
  rep.area_centers.resize(n_theta);
  rep.pair_cost.assign(n_theta, CostGrid(rep.height, kInfinity));

  const int w = rep.height.width();
  const int h = rep.height.height();
  for (int t = 0; t < n_theta; ++t) {
    const double th = t * theta_step(Level::l2);
    rep.left_area[t] = rect_cells(g.foot_area_length, g.foot_area_width, 0.0, g.lateral_offset, th, res);
    rep.right_area[t] = rect_cells(g.foot_area_length, g.foot_area_width, 0.0, -g.lateral_offset, th, res);
    const double sx = -std::sin(th) * g.lateral_offset;
    const double sy = std::cos(th) * g.lateral_offset;
    rep.area_centers[t] = {CellOffset{static_cast<int>(std::lround(sx / res)), static_cast<int>(std::lround(sy / res))},
                           CellOffset{static_cast<int>(std::lround(-sx / res)), static_cast<int>(std::lround(-sy / res))}};

    CostGrid& out = rep.pair_cost[t];
    for (int r = 0; r < h; ++r) {
      for (int c = 0; c < w; ++c) {
        bool centers_ok = true;
        for (const CellOffset& o : rep.area_centers[t])
          centers_ok = centers_ok && rep.drivable({c + o.dx, r + o.dy});
        if (!centers_ok) continue;
        double sum = 0.0;
        int n = 0;
        for (const auto* area : {&rep.left_area[t], &rep.right_area[t]}) {
          for (const CellOffset& o : *area) {
            const GridIndex q{c + o.dx, r + o.dy};
            if (!rep.drivable(q)) continue;
            sum += rep.diff[q];
            ++n;
          }
        }
        out[{c, r}] = static_cast<float>(1.0 + cfg.costs.pair_cost_slope * (sum / n));
      }
    }
  }
  return rep;
}

TerrainClassGrid classify_terrain(const Level2Rep& l2, const PlannerConfig& cfg) {
  const CostParams& p = cfg.costs;
  const HeightGrid& hg = l2.height;
  const int w = hg.width();
  const int h = hg.height();
  const double res = hg.resolution();

  TerrainClassGrid out;
  out.width = w;
  out.height = h;
  out.resolution = res;
  out.origin = hg.origin();
  out.classes.assign(static_cast<std::size_t>(w) * h, TerrainClass::unknown);
  out.alpha.assign(out.classes.size(), kUnknown);

  auto blocked = [&](GridIndex q) {
    const float d = l2.diff.value_or(q, kUnknown);
    return !std::isnan(d) && d > l2.drive_limit + kHeightEps;
  };

  std::vector<double> acc_c(out.classes.size(), 0.0);
  std::vector<double> acc_s(out.classes.size(), 0.0);
  std::vector<double> acc_w(out.classes.size(), 0.0);
  auto add = [&](GridIndex q, double c2, double s2, double wt) {
    const std::size_t i = out.offset(q);
    acc_c[i] += wt * c2;
    acc_s[i] += wt * s2;
    acc_w[i] += wt;
  };

  const double reach = p.max_step_length / res;
  const int rmax = static_cast<int>(std::ceil(reach));
  std::vector<CellOffset> offsets;  // half plane, each unordered pair once
  for (int dy = 0; dy <= rmax; ++dy)
    for (int dx = -rmax; dx <= rmax; ++dx)
      if ((dy > 0 || dx > 0) && dx * dx + dy * dy < reach * reach - 1e-9) offsets.push_back({dx, dy});

  auto next_to_blocked = [&](GridIndex q) {
    for (int dy = -1; dy <= 1; ++dy)
      for (int dx = -1; dx <= 1; ++dx)
        if ((dx || dy) && blocked({q.col + dx, q.row + dy})) return true;
    return false;
  };
  std::vector<char> edge(out.classes.size(), 0);
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c)
      edge[out.offset({c, r})] = l2.drivable({c, r}) && next_to_blocked({c, r});

  std::vector<GridIndex> between;
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      const GridIndex a{c, r};
      if (!edge[out.offset(a)]) continue;
      const float ha = hg[a];
      for (const CellOffset& o : offsets) {
        const GridIndex b{c + o.dx, r + o.dy};
        if (!out.in_bounds(b) || !edge[out.offset(b)]) continue;
        const float hb = hg[b];
        if (std::isnan(ha) || std::isnan(hb) || std::abs(ha - hb) > p.max_step_height + kHeightEps) continue;
        const double ceiling = std::max(ha, hb) + p.max_step_height + kHeightEps;
        between.clear();
        const bool ok = walk_interior(a, b, [&](GridIndex q) {
          if (!blocked(q)) return false;
          const float hq = hg[q];
          if (std::isnan(hq) || hq > ceiling) return false;
          between.push_back(q);
          return true;
        });
        if (!ok || between.empty()) continue;
        double alpha = std::atan2(o.dy, o.dx);
        if (alpha < 0.0) alpha += kPi;
        const double c2 = std::cos(2.0 * alpha);
        const double s2 = std::sin(2.0 * alpha);
        // Long oblique crossings of a narrow band would otherwise outvote the
        // short ones across it.
        const double wt = 1.0 / (o.dx * o.dx + o.dy * o.dy);
        add(a, c2, s2, wt);
        add(b, c2, s2, wt);
        for (GridIndex q : between) add(q, c2, s2, wt);
      }
    }
  }

  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      const std::size_t i = out.offset({c, r});
      if (acc_w[i] > 0.0) {
        const double resultant = std::hypot(acc_c[i], acc_s[i]) / acc_w[i];
        if (resultant < p.ambiguous_resultant) {
          out.classes[i] = TerrainClass::wall;
        } else {
          double a = 0.5 * std::atan2(acc_s[i], acc_c[i]);
          if (a < 0.0) a += kPi;
          if (a >= kPi) a -= kPi;
          out.classes[i] = TerrainClass::step;
          out.alpha[i] = static_cast<float>(a);
        }
        continue;
      }
      const float d = l2.diff[{c, r}];
      if (std::isnan(d)) out.classes[i] = TerrainClass::unknown;
      else if (d <= p.flat_limit) out.classes[i] = TerrainClass::flat;
      else if (d <= p.rough_limit) out.classes[i] = TerrainClass::rough;
      else out.classes[i] = TerrainClass::wall;
    }
  }
  return out;
}

Level3Rep build_level3(const Level2Rep& l2, const TerrainClassGrid& classes, const PlannerConfig& cfg) {
  Level3Rep rep;
  rep.height = subsample(l2.height);
  rep.diff = subsample(l2.diff);
  const int w = rep.height.width();
  const int h = rep.height.height();
  const double res = rep.height.resolution();

  TerrainClassGrid& cls = rep.classes;
  cls.width = w;
  cls.height = h;
  cls.resolution = res;
  cls.origin = rep.height.origin();
  cls.classes.assign(static_cast<std::size_t>(w) * h, TerrainClass::unknown);
  cls.alpha.assign(cls.classes.size(), kUnknown);
  rep.cell_cost = CostGrid(rep.height, kUnknown);

  std::vector<double> child_alpha;
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      std::array<TerrainClass, 4> members;
      child_alpha.clear();
      int m = 0;
      for (int v = 0; v < 2; ++v) {
        for (int u = 0; u < 2; ++u) {
          const GridIndex q{2 * c + u, 2 * r + v};
          members[m++] = classes.at(q);
          if (classes.at(q) == TerrainClass::step) child_alpha.push_back(classes.alpha_at(q));
        }
      }
      TerrainClass k = merge_classes(members);
      const std::size_t i = cls.offset({c, r});
      if (k == TerrainClass::step) cls.alpha[i] = static_cast<float>(circular_mean(child_alpha).angle);
      cls.classes[i] = k;
      rep.cell_cost[{c, r}] = static_cast<float>(class_cost(k, rep.diff[{c, r}], cfg.costs));
    }
  }

  const RobotGeometry& g = cfg.robot;
  const int n_theta = theta_count(Level::l3);
  const double heading_tol = 2.0 * kPi / n_theta;
  rep.contact_area.resize(n_theta);
  rep.area_cost.assign(n_theta, CostGrid(rep.height, kUnknown));
  rep.relaxed_area_cost.assign(n_theta, CostGrid(rep.height, kUnknown));
  rep.step_flags.assign(n_theta, std::vector<std::uint8_t>(cls.classes.size(), 0));
  for (int t = 0; t < n_theta; ++t) {
    const double th = t * theta_step(Level::l3);
    const auto& area = rep.contact_area[t] =
        rect_cells(g.contact_area_length, g.contact_area_width, 0.0, 0.0, th, res);
    const double limit = cfg.costs.unknown_area_fraction * static_cast<double>(area.size());
    for (int r = 0; r < h; ++r) {
      for (int c = 0; c < w; ++c) {
        double sum = 0.0;
        int known = 0;
        int unknown = 0;
        int outside = 0;
        bool wall = false;
        bool has_step = false;
        bool heading_ok = true;
        for (const CellOffset& o : area) {
          const GridIndex q{c + o.dx, r + o.dy};
          const float cc = rep.cell_cost.value_or(q, kUnknown);
          if (std::isinf(cc)) {
            wall = true;
            break;
          }
          if (std::isnan(cc)) {
            ++unknown;
            if (!cls.in_bounds(q)) ++outside;
            continue;
          }
          sum += cc;
          ++known;
          if (cls.at(q) == TerrainClass::step) {
            has_step = true;
            if (angle_distance(cls.alpha_at(q), th, kPi) >= heading_tol) heading_ok = false;
          }
        }
        const std::size_t i = cls.offset({c, r});
        rep.step_flags[t][i] = static_cast<std::uint8_t>((has_step ? kHasStep : 0) | (heading_ok ? kHeadingOk : 0));
        if (wall) {
          rep.area_cost[t][{c, r}] = kInfinity;
          rep.relaxed_area_cost[t][{c, r}] = kInfinity;
          continue;
        }
        // Off-map cells will never be observed: they are left out of the
        // relaxed mean and limited like unknown cells are for the planner.
        if (outside > limit) {
          rep.relaxed_area_cost[t][{c, r}] = kInfinity;
          continue;
        }
        const int inside_unknown = unknown - outside;
        if (known + inside_unknown > 0)
          rep.relaxed_area_cost[t][{c, r}] = static_cast<float>((sum + inside_unknown) / (known + inside_unknown));
        if (unknown > limit || known == 0) continue;
        rep.area_cost[t][{c, r}] = static_cast<float>(sum / known);
      }
    }
  }
  return rep;
}

LevelMaps build_levels(const HeightGrid& heights, const PlannerConfig& cfg) {
  LevelMaps maps;
  maps.lattice = Lattice{heights.origin(), heights.resolution(), heights.width(), heights.height()};
  maps.l1 = build_level1(heights, cfg);
  maps.l2 = build_level2(maps.l1, cfg);
  maps.classes_l2 = classify_terrain(maps.l2, cfg);
  maps.l3 = build_level3(maps.l2, maps.classes_l2, cfg);
  return maps;
}

}  // namespace strata
