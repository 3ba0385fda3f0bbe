#include "strata/gridmap.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace strata {

namespace {

std::vector<std::string> split_tokens(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream ss(line);
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

double parse_number(const std::string& tok, int line, bool allow_unknown) {
  if (allow_unknown && (tok == "nan" || tok == "NaN" || tok == "NAN")) return kUnknown;
  double v = 0.0;
  const auto* first = tok.data();
  const auto* last = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last) throw ParseError(line, "invalid number '" + tok + "'");
  if (!std::isfinite(v)) throw ParseError(line, "non-finite value '" + tok + "'");
  return v;
}

int parse_count(const std::string& tok, int line) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size() || v < 1)
    throw ParseError(line, "invalid cell count '" + tok + "'");
  return v;
}

}  // namespace

HeightGrid parse_height_map(std::istream& in) {
  std::string line;
  int lineno = 0;
  // Header; blank lines are not allowed before it.
  if (!std::getline(in, line)) throw ParseError(1, "missing HMAP header");
  ++lineno;
  const auto head = split_tokens(line);
  if (head.size() != 6 || head[0] != "HMAP") throw ParseError(lineno, "malformed HMAP header");
  const int width = parse_count(head[1], lineno);
  const int height = parse_count(head[2], lineno);
  const double res = parse_number(head[3], lineno, false);
  if (res <= 0.0) throw ParseError(lineno, "resolution must be positive");
  const WorldPoint origin{parse_number(head[4], lineno, false), parse_number(head[5], lineno, false)};

  HeightGrid grid(width, height, res, origin);
  int row = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto toks = split_tokens(line);
    if (toks.empty()) continue;
    if (row >= height) throw ParseError(lineno, "more rows than declared height");
    if (static_cast<int>(toks.size()) != width)
      throw ParseError(lineno, "expected " + std::to_string(width) + " values, found " +
                                   std::to_string(toks.size()));
    for (int col = 0; col < width; ++col)
      grid[{col, row}] = static_cast<float>(parse_number(toks[col], lineno, true));
    ++row;
  }
  if (row != height)
    throw ParseError(lineno, "expected " + std::to_string(height) + " rows, found " +
                                 std::to_string(row));
  return grid;
}

HeightGrid load_height_map(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open height map " + path.string());
  return parse_height_map(in);
}

void write_height_map(std::ostream& out, const HeightGrid& grid) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "HMAP %d %d %.6g %.6f %.6f\n", grid.width(), grid.height(),
                grid.resolution(), grid.origin().x, grid.origin().y);
  out << buf;
  for (int row = 0; row < grid.height(); ++row) {
    for (int col = 0; col < grid.width(); ++col) {
      const float v = grid[{col, row}];
      if (col) out << ' ';
      if (std::isnan(v)) {
        out << "nan";
      } else {
        std::snprintf(buf, sizeof buf, "%.6f", static_cast<double>(v));
        out << buf;
      }
    }
    out << '\n';
  }
}

void save_height_map(const std::filesystem::path& path, const HeightGrid& grid) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write height map " + path.string());
  write_height_map(out, grid);
}

DiffGrid height_diff_map(const HeightGrid& heights) {
  DiffGrid out(heights, kUnknown);
  for (int row = 0; row < heights.height(); ++row) {
    for (int col = 0; col < heights.width(); ++col) {
      const float h = heights[{col, row}];
      if (std::isnan(h)) continue;
      float best = -1.0f;
      for (int dr = -1; dr <= 1; ++dr) {
        for (int dc = -1; dc <= 1; ++dc) {
          if (dr == 0 && dc == 0) continue;
          const GridIndex n{col + dc, row + dr};
          if (!heights.known(n)) continue;
          best = std::max(best, std::abs(h - heights[n]));
        }
      }
      if (best >= 0.0f) out[{col, row}] = best;
    }
  }
  return out;
}

namespace detail {

SubsampledCell subsample_cell(std::span<const float> cells, int width, int height, int col, int row) {
  double mass = 0.0;
  double sum = 0.0;
  for (int v = 0; v < 4; ++v) {
    const int r = 2 * row - 1 + v;
    if (r < 0 || r >= height) continue;
    for (int u = 0; u < 4; ++u) {
      const int c = 2 * col - 1 + u;
      if (c < 0 || c >= width) continue;
      const float x = cells[static_cast<std::size_t>(r) * width + c];
      if (std::isnan(x)) continue;
      const double w = kBinomialRow[u] * kBinomialRow[v];
      mass += w;
      sum += w * x;
    }
  }
  SubsampledCell out;
  out.known_mass = mass;
  out.value = mass > 0.0 ? sum / mass : std::numeric_limits<double>::quiet_NaN();
  return out;
}

}  // namespace detail

void write_pgm(const std::filesystem::path& path, std::span<const float> cells, int width,
               int height, double lo, double hi, const std::vector<std::string>& legend) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "P2\n" << width << ' ' << height << "\n255\n";
  const double span = hi > lo ? hi - lo : 1.0;
  // Top image row is the highest grid row.
  for (int row = height - 1; row >= 0; --row) {
    for (int col = 0; col < width; ++col) {
      const float v = cells[static_cast<std::size_t>(row) * width + col];
      int g = 0;
      if (std::isnan(v)) {
        g = 0;
      } else if (std::isinf(v)) {
        g = 255;
      } else {
        const double t = std::clamp((v - lo) / span, 0.0, 1.0);
        g = 1 + static_cast<int>(std::lround(t * 253.0));
      }
      out << g << (col + 1 < width ? ' ' : '\n');
    }
  }
  std::filesystem::path side = path;
  side += ".txt";
  std::ofstream meta(side);
  meta << "min " << lo << "\nmax " << hi << "\n";
  meta << "gray 0 = unknown, 255 = infinite, 1..254 linear in [min, max]\n";
  for (const auto& l : legend) meta << l << '\n';
}

}  // namespace strata
