#include "strata/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "strata/config.hpp"

namespace strata {

namespace {

constexpr double kRes = 0.025;

double num(const ParamMap& p, const std::string& key, double fallback) {
  auto it = p.find(key);
  if (it == p.end()) return fallback;
  try {
    std::size_t used = 0;
    const double v = std::stod(it->second, &used);
    if (used != it->second.size() || !std::isfinite(v)) throw std::invalid_argument(key);
    return v;
  } catch (const std::exception&) {
    throw ContractError("parameter '" + key + "' is not a number: '" + it->second + "'");
  }
}

void require(bool ok, const std::string& what) {
  if (!ok) throw ContractError("invalid scenario parameter: " + what);
}

HeightGrid blank(double size_x, double size_y, double h = 0.0) {
  require(size_x >= 1.0 && size_y >= 1.0, "map size must be at least 1 m");
  require(size_x <= 200.0 && size_y <= 200.0, "map size must be at most 200 m");
  const int w = static_cast<int>(std::lround(size_x / kRes));
  const int hh = static_cast<int>(std::lround(size_y / kRes));
  return HeightGrid(w, hh, kRes, {0.0, 0.0}, static_cast<float>(h));
}

int edge(double x) { return aligned_edge(x, 0.0, kRes); }

// Sets heights on fine cells [c0, c1) x [r0, r1), clipped.
void fill_cells(HeightGrid& g, int c0, int r0, int c1, int r1, double h) {
  c0 = std::max(c0, 0);
  r0 = std::max(r0, 0);
  c1 = std::min(c1, g.width());
  r1 = std::min(r1, g.height());
  for (int r = r0; r < r1; ++r)
    for (int c = c0; c < c1; ++c) g[{c, r}] = static_cast<float>(h);
}

void fill_box(HeightGrid& g, double x0, double y0, double x1, double y1, double h) {
  fill_cells(g, edge(x0), edge(y0), edge(x1), edge(y1), h);
}

std::string pose_text(double x, double y, int theta) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "L1 %.3f %.3f %d", x, y, theta);
  return buf;
}

// Center of the fine cell just above/right of an aligned edge, so poses land
// on the 10 cm lattice.
double lattice_coord(double x) { return std::round(x / 0.1) * 0.1; }

Scenario flat(const ParamMap& p) {
  const double sx = num(p, "size_x", 6.0);
  const double sy = num(p, "size_y", 4.0);
  Scenario s;
  s.map = blank(sx, sy, num(p, "height", 0.0));
  const double y = lattice_coord(sy / 2);
  s.start = pose_text(1.0, y, 0);
  s.goal = pose_text(lattice_coord(sx - 1.0), y, 0);
  return s;
}

Scenario rough(const ParamMap& p) {
  const double sx = num(p, "size_x", 6.0);
  const double sy = num(p, "size_y", 4.0);
  const double a = num(p, "amplitude", 0.4 / 107.0);
  require(a >= 0.0 && a <= 0.2, "amplitude in [0, 0.2]");
  Scenario s;
  s.map = blank(sx, sy);
  for (int r = 0; r < s.map.height(); ++r)
    for (int c = 0; c < s.map.width(); ++c) s.map[{c, r}] = static_cast<float>(((r + c) % 2) * a);
  const double y = lattice_coord(sy / 2);
  s.start = pose_text(1.0, y, 0);
  s.goal = pose_text(lattice_coord(sx - 1.0), y, 0);
  return s;
}

Scenario corridor(const ParamMap& p) {
  const double sx = num(p, "size_x", 12.0);
  const double sy = num(p, "size_y", 3.0);
  const double wall = num(p, "wall_height", 0.6);
  const double thick = num(p, "wall_thickness", 0.3);
  require(thick > 0.0 && 2 * thick < sy - 1.0, "walls leave at least 1 m of corridor");
  Scenario s;
  s.map = blank(sx, sy);
  fill_box(s.map, 0.0, 0.0, sx + 1.0, thick, wall);
  fill_box(s.map, 0.0, sy - thick, sx + 1.0, sy + 1.0, wall);
  const double y = lattice_coord(sy / 2);
  s.start = pose_text(1.0, y, 0);
  s.goal = pose_text(lattice_coord(sx - 1.0), y, 0);
  return s;
}

Scenario bar(const ParamMap& p) {
  const double sx = num(p, "size_x", 6.0);
  const double sy = num(p, "size_y", 4.0);
  const double x = num(p, "x", sx / 2);
  const double h = num(p, "height", 0.1);
  const double w = num(p, "width", 0.05);
  const double gap = num(p, "gap", 0.0);
  require(h > 0.0 && h <= 2.0, "bar height in (0, 2]");
  require(w >= kRes && w <= 2.0, "bar width in [0.025, 2]");
  require(gap >= 0.0 && gap < sy, "gap in [0, size_y)");
  Scenario s;
  s.map = blank(sx, sy);
  const int c0 = edge(x);
  const int c1 = c0 + std::max(1, static_cast<int>(std::lround(w / kRes)));
  const int g0 = edge(sy / 2 - gap / 2);
  const int g1 = edge(sy / 2 + gap / 2);
  fill_cells(s.map, c0, 0, c1, s.map.height(), h);
  if (gap > 0.0) fill_cells(s.map, c0, g0, c1, g1, 0.0);
  const double y = lattice_coord(sy / 2);
  s.start = pose_text(1.0, y, 0);
  s.goal = pose_text(lattice_coord(sx - 1.0), y, 0);
  return s;
}

Scenario stairs(const ParamMap& p) {
  const double riser = num(p, "riser", 0.15);
  const double tread = num(p, "tread", 0.30);
  const int count = static_cast<int>(num(p, "count", 4));
  const double x0 = num(p, "start_x", 2.0);
  const double landing = num(p, "landing", 2.0);
  const double sy = num(p, "size_y", 3.0);
  require(riser > 0.0 && riser <= 1.0, "riser in (0, 1]");
  require(tread >= 0.1 && tread <= 5.0, "tread in [0.1, 5]");
  require(count >= 1 && count <= 50, "count in [1, 50]");
  require(x0 >= 1.0 && landing >= 1.0, "start_x and landing at least 1 m");
  const double sx = x0 + count * tread + landing;
  Scenario s;
  s.map = blank(sx, sy);
  for (int i = 0; i < count; ++i) fill_box(s.map, x0 + i * tread, -1.0, sx + 1.0, sy + 1.0, (i + 1) * riser);
  const double y = lattice_coord(sy / 2);
  s.start = pose_text(lattice_coord(x0 - 1.0), y, 0);
  s.goal = pose_text(lattice_coord(sx - 0.8), y, 0);
  return s;
}

Scenario ramp(const ParamMap& p) {
  const double slope = num(p, "slope", 0.1);
  const double len = num(p, "length", 2.0);
  const double x0 = num(p, "start_x", 2.0);
  const double sy = num(p, "size_y", 3.0);
  require(slope >= 0.0 && slope <= 1.0, "slope in [0, 1]");
  require(len > 0.0, "ramp length positive");
  const double sx = x0 + len + 2.0;
  Scenario s;
  s.map = blank(sx, sy);
  for (int r = 0; r < s.map.height(); ++r) {
    for (int c = 0; c < s.map.width(); ++c) {
      const double x = c * kRes;
      s.map[{c, r}] = static_cast<float>(slope * std::clamp(x - x0, 0.0, len));
    }
  }
  const double y = lattice_coord(sy / 2);
  s.start = pose_text(lattice_coord(x0 - 1.0), y, 0);
  s.goal = pose_text(lattice_coord(sx - 1.0), y, 0);
  return s;
}

// Random boxes; keeps `clear` meters around start and goal free.
void scatter(HeightGrid& g, std::mt19937_64& rng, int count, double x0, double y0, double x1, double y1,
             double hmin, double hmax, const std::vector<std::pair<double, double>>& keep_free, double clear) {
  std::uniform_real_distribution<double> ux(x0, x1), uy(y0, y1), us(0.2, 0.5), uh(hmin, hmax);
  int placed = 0;
  for (int tries = 0; placed < count && tries < 50 * count; ++tries) {
    const double cx = ux(rng), cy = uy(rng), w = us(rng), d = us(rng), h = uh(rng);
    bool ok = true;
    for (const auto& [fx, fy] : keep_free)
      if (std::abs(cx - fx) < clear + w / 2 && std::abs(cy - fy) < clear + d / 2) ok = false;
    if (!ok) continue;
    fill_box(g, cx - w / 2, cy - d / 2, cx + w / 2, cy + d / 2, h);
    ++placed;
  }
}

Scenario clutter(const ParamMap& p) {
  const double sx = num(p, "size_x", 8.0);
  const double sy = num(p, "size_y", 8.0);
  const int count = static_cast<int>(num(p, "count", 20));
  const auto seed = static_cast<std::uint64_t>(num(p, "seed", 1));
  require(count >= 0 && count <= 10000, "count in [0, 10000]");
  Scenario s;
  s.map = blank(sx, sy);
  std::mt19937_64 rng(seed);
  const double y = lattice_coord(sy / 2);
  const double gx = lattice_coord(sx - 1.0);
  scatter(s.map, rng, count, 0.0, 0.0, sx, sy, num(p, "min_height", 0.05), num(p, "max_height", 0.4),
          {{1.0, y}, {gx, y}}, 1.0);
  s.start = pose_text(1.0, y, 0);
  s.goal = pose_text(gx, y, 0);
  return s;
}

// 20 x 20 m: a bar with an opening, a full-width flight of stairs on the
// right half and a cluttered band in between.
Scenario composite(const ParamMap& p) {
  const double sx = num(p, "size_x", 20.0);
  const double sy = num(p, "size_y", 20.0);
  const auto seed = static_cast<std::uint64_t>(num(p, "seed", 7));
  require(sx >= 14.0 && sy >= 8.0, "composite needs at least 14 x 8 m");
  Scenario s;
  s.map = blank(sx, sy);
  const double y = lattice_coord(sy / 2);
  const double bar_x = num(p, "bar_x", 6.0);
  const double gap = num(p, "bar_gap", 1.6);
  const double gap_y = num(p, "bar_gap_y", sy / 2 + 3.0);
  const int c0 = edge(bar_x);
  fill_cells(s.map, c0, 0, c0 + 4, s.map.height(), num(p, "bar_height", 0.6));
  fill_cells(s.map, c0, edge(gap_y - gap / 2), c0 + 4, edge(gap_y + gap / 2), 0.0);

  std::mt19937_64 rng(seed);
  const double cl0 = bar_x + 1.5;
  const double cl1 = cl0 + num(p, "clutter_depth", 3.0);
  scatter(s.map, rng, static_cast<int>(num(p, "clutter_count", 25)), cl0, 0.0, cl1, sy, 0.05, 0.5, {}, 0.0);

  const double st0 = cl1 + 1.5;
  const int count = static_cast<int>(num(p, "stair_count", 3));
  const double riser = num(p, "riser", 0.15);
  const double tread = num(p, "tread", 0.3);
  require(st0 + count * tread + 2.0 <= sx, "stairs must fit in the map");
  for (int i = 0; i < count; ++i) fill_box(s.map, st0 + i * tread, -1.0, sx + 1.0, sy + 1.0, (i + 1) * riser);

  s.start = pose_text(1.0, y, 0);
  s.goal = pose_text(lattice_coord(sx - 1.0), y, 0);
  return s;
}

Scenario maze(const ParamMap& p) {
  const int cells = static_cast<int>(num(p, "cells", 4));
  const double cell = num(p, "cell_size", 2.5);
  const double thick = num(p, "wall_thickness", 0.2);
  const double wall = num(p, "wall_height", 0.8);
  const auto seed = static_cast<std::uint64_t>(num(p, "seed", 3));
  require(cells >= 2 && cells <= 40, "cells in [2, 40]");
  require(cell >= 1.6, "maze cells at least 1.6 m");
  const double size = cells * cell;
  Scenario s;
  s.map = blank(size, size);
  // Depth-first maze over a cells x cells grid.
  std::vector<int> open_e(cells * cells, 0), open_n(cells * cells, 0), seen(cells * cells, 0);
  std::mt19937_64 rng(seed);
  std::vector<int> stack{0};
  seen[0] = 1;
  while (!stack.empty()) {
    const int cur = stack.back();
    const int cx = cur % cells, cy = cur / cells;
    std::vector<int> nb;
    if (cx > 0 && !seen[cur - 1]) nb.push_back(cur - 1);
    if (cx + 1 < cells && !seen[cur + 1]) nb.push_back(cur + 1);
    if (cy > 0 && !seen[cur - cells]) nb.push_back(cur - cells);
    if (cy + 1 < cells && !seen[cur + cells]) nb.push_back(cur + cells);
    if (nb.empty()) {
      stack.pop_back();
      continue;
    }
    const int nxt = nb[std::uniform_int_distribution<std::size_t>(0, nb.size() - 1)(rng)];
    if (nxt == cur + 1) open_e[cur] = 1;
    if (nxt == cur - 1) open_e[nxt] = 1;
    if (nxt == cur + cells) open_n[cur] = 1;
    if (nxt == cur - cells) open_n[nxt] = 1;
    seen[nxt] = 1;
    stack.push_back(nxt);
  }
  const double t = thick / 2;
  fill_box(s.map, -1.0, -1.0, size + 1.0, t, wall);
  fill_box(s.map, -1.0, size - t, size + 1.0, size + 1.0, wall);
  fill_box(s.map, -1.0, -1.0, t, size + 1.0, wall);
  fill_box(s.map, size - t, -1.0, size + 1.0, size + 1.0, wall);
  for (int cy = 0; cy < cells; ++cy) {
    for (int cx = 0; cx < cells; ++cx) {
      const int i = cy * cells + cx;
      const double x1 = (cx + 1) * cell, y1 = (cy + 1) * cell;
      if (cx + 1 < cells && !open_e[i]) fill_box(s.map, x1 - t, cy * cell - t, x1 + t, y1 + t, wall);
      if (cy + 1 < cells && !open_n[i]) fill_box(s.map, cx * cell - t, y1 - t, x1 + t, y1 + t, wall);
    }
  }
  const double c = lattice_coord(cell / 2);
  s.start = pose_text(c, c, 0);
  s.goal = pose_text(lattice_coord(size - cell / 2), lattice_coord(size - cell / 2), 0);
  return s;
}

// Thin tall wall, narrow enough that subsampling hides most of it.
Scenario wall(const ParamMap& p) {
  const double sx = num(p, "size_x", 6.0);
  const double sy = num(p, "size_y", 3.0);
  const double x = num(p, "x", sx / 2);
  const double h = num(p, "height", 0.5);
  const int cells = static_cast<int>(num(p, "cells", 1));
  require(cells >= 1 && cells <= 40, "wall cells in [1, 40]");
  require(h > 0.0, "wall height positive");
  Scenario s;
  s.map = blank(sx, sy);
  const int c0 = edge(x);
  fill_cells(s.map, c0, 0, c0 + cells, s.map.height(), h);
  const double y = lattice_coord(sy / 2);
  s.start = pose_text(1.0, y, 0);
  s.goal = pose_text(lattice_coord(sx - 1.0), y, 0);
  return s;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

int aligned_edge(double x, double origin, double resolution) {
  const double col = (x - origin) / resolution + 0.5;
  return 4 * static_cast<int>(std::lround(col / 4.0));
}

Scenario generate_scenario(const std::string& kind, const ParamMap& params) {
  Scenario s;
  if (kind == "flat") s = flat(params);
  else if (kind == "rough") s = rough(params);
  else if (kind == "corridor") s = corridor(params);
  else if (kind == "bar") s = bar(params);
  else if (kind == "stairs") s = stairs(params);
  else if (kind == "ramp") s = ramp(params);
  else if (kind == "clutter") s = clutter(params);
  else if (kind == "composite") s = composite(params);
  else if (kind == "maze") s = maze(params);
  else if (kind == "wall") s = wall(params);
  else throw ContractError("unknown scenario kind '" + kind + "'");
  s.kind = kind;
  s.name = params.count("name") ? params.at("name") : kind;
  s.params = params;
  s.params.erase("name");
  if (params.count("reachable")) s.expect_reachable = params.at("reachable") != "false";
  return s;
}

std::filesystem::path save_scenario(const Scenario& s, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const auto map_name = s.name + ".hmap";
  save_height_map(dir / map_name, s.map);
  const auto scn = dir / (s.name + ".scn");
  std::ofstream out(scn);
  if (!out) throw std::runtime_error("cannot write " + scn.string());
  out << "name = " << s.name << "\nkind = " << s.kind << "\nmap = " << map_name << "\nstart = " << s.start
      << "\ngoal = " << s.goal << "\nreachable = " << (s.expect_reachable ? "true" : "false") << "\n";
  for (const auto& [k, v] : s.params) out << "param." << k << " = " << v << "\n";
  return scn;
}

ParamMap parse_key_values(std::istream& in) {
  ParamMap out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(lineno, "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ParseError(lineno, "empty key");
    out[key] = trim(line.substr(eq + 1));
  }
  return out;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scenario " + path.string());
  const ParamMap kv = parse_key_values(in);
  for (const char* key : {"map", "start", "goal"})
    if (!kv.count(key)) throw ContractError(path.string() + ": missing '" + key + "'");
  Scenario s;
  s.name = kv.count("name") ? kv.at("name") : path.stem().string();
  s.kind = kv.count("kind") ? kv.at("kind") : "file";
  s.start = kv.at("start");
  s.goal = kv.at("goal");
  s.expect_reachable = !kv.count("reachable") || kv.at("reachable") != "false";
  for (const auto& [k, v] : kv)
    if (k.rfind("param.", 0) == 0) s.params[k.substr(6)] = v;
  s.map = load_height_map(path.parent_path() / kv.at("map"));
  return s;
}

}  // namespace strata
