#pragma once

#include <array>
#include <cmath>
#include <filesystem>
#include <iosfwd>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace strata {

struct GridIndex {
  int col = 0;
  int row = 0;
  friend bool operator==(const GridIndex&, const GridIndex&) = default;
};

struct WorldPoint {
  double x = 0.0;
  double y = 0.0;
};

inline constexpr float kUnknown = std::numeric_limits<float>::quiet_NaN();
inline constexpr float kInfinity = std::numeric_limits<float>::infinity();
// Heights are stored as float; limits given in meters are compared with this slack.
inline constexpr double kHeightEps = 1e-5;

/// Row-major 2D grid of float samples. NaN marks unknown cells. `origin` is
/// the world position of the center of cell (0,0); rows grow along +y.
template <class Tag>
class Grid {
 public:
  Grid() = default;
  Grid(int width, int height, double resolution, WorldPoint origin, float fill = kUnknown)
      : width_(width), height_(height), resolution_(resolution), origin_(origin) {
    if (width < 1 || height < 1) throw std::invalid_argument("grid needs at least one cell");
    if (!(resolution > 0.0)) throw std::invalid_argument("grid resolution must be positive");
    cells_.assign(static_cast<std::size_t>(width) * height, fill);
  }

  template <class OtherTag>
  Grid(const Grid<OtherTag>& shape, float fill)
      : Grid(shape.width(), shape.height(), shape.resolution(), shape.origin(), fill) {}

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  double resolution() const noexcept { return resolution_; }
  WorldPoint origin() const noexcept { return origin_; }
  bool empty() const noexcept { return cells_.empty(); }

  bool in_bounds(GridIndex c) const noexcept {
    return c.col >= 0 && c.row >= 0 && c.col < width_ && c.row < height_;
  }
  std::size_t offset(GridIndex c) const noexcept {
    return static_cast<std::size_t>(c.row) * width_ + c.col;
  }

  float operator[](GridIndex c) const noexcept { return cells_[offset(c)]; }
  float& operator[](GridIndex c) noexcept { return cells_[offset(c)]; }

  float at(GridIndex c) const {
    if (!in_bounds(c)) throw std::out_of_range("grid index out of bounds");
    return cells_[offset(c)];
  }
  float value_or(GridIndex c, float fallback) const noexcept {
    return in_bounds(c) ? cells_[offset(c)] : fallback;
  }
  bool known(GridIndex c) const noexcept { return in_bounds(c) && !std::isnan(cells_[offset(c)]); }

  /// Index of the cell whose center is nearest to `p`; may be out of bounds.
  GridIndex index_of(WorldPoint p) const noexcept {
    return {static_cast<int>(std::floor((p.x - origin_.x) / resolution_ + 0.5)),
            static_cast<int>(std::floor((p.y - origin_.y) / resolution_ + 0.5))};
  }
  WorldPoint world_of(GridIndex c) const noexcept {
    return {origin_.x + c.col * resolution_, origin_.y + c.row * resolution_};
  }

  std::span<const float> cells() const noexcept { return cells_; }
  std::span<float> cells() noexcept { return cells_; }

 private:
  int width_ = 0;
  int height_ = 0;
  double resolution_ = 1.0;
  WorldPoint origin_{};
  std::vector<float> cells_;
};

struct HeightTag {};
struct DiffTag {};
struct CostTag {};
using HeightGrid = Grid<HeightTag>;
using DiffGrid = Grid<DiffTag>;
using CostGrid = Grid<CostTag>;

/// HMAP parse failure; `line()` is 1-based.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

HeightGrid parse_height_map(std::istream& in);
HeightGrid load_height_map(const std::filesystem::path& path);
void write_height_map(std::ostream& out, const HeightGrid& grid);
void save_height_map(const std::filesystem::path& path, const HeightGrid& grid);

/// Max absolute height difference to the known 8-neighbours of each cell.
DiffGrid height_diff_map(const HeightGrid& heights);

/// Binomial row used for subsampling, (1,3,3,1)/8.
inline constexpr std::array<double, 4> kBinomialRow{1.0 / 8, 3.0 / 8, 3.0 / 8, 1.0 / 8};

/// Coarse cells with less known kernel mass than this are unknown.
inline constexpr double kMinKnownMass = 0.5;

struct SubsampledCell {
  double value = 0.0;  // renormalized weighted mean, NaN if no known cell
  double known_mass = 0.0;
};

namespace detail {
SubsampledCell subsample_cell(std::span<const float> cells, int width, int height, int col, int row);
}

/// Kernel evaluation for coarse cell (col,row); the window spans fine
/// columns 2*col-1 .. 2*col+2 and likewise for rows.
template <class Tag>
SubsampledCell subsample_cell(const Grid<Tag>& fine, int col, int row) {
  return detail::subsample_cell(fine.cells(), fine.width(), fine.height(), col, row);
}

/// Halves the linear resolution. Coarse cell (i,j) covers fine cells
/// (2i..2i+1, 2j..2j+1), so all levels share the same lower-left corner.
template <class Tag>
Grid<Tag> subsample(const Grid<Tag>& fine) {
  const int w = (fine.width() + 1) / 2;
  const int h = (fine.height() + 1) / 2;
  const double r = fine.resolution();
  Grid<Tag> out(w, h, 2.0 * r, {fine.origin().x + 0.5 * r, fine.origin().y + 0.5 * r});
  for (int row = 0; row < h; ++row) {
    for (int col = 0; col < w; ++col) {
      const SubsampledCell c = subsample_cell(fine, col, row);
      out[{col, row}] = c.known_mass < kMinKnownMass ? kUnknown : static_cast<float>(c.value);
    }
  }
  return out;
}

/// Writes an ASCII graymap (P2). Values are mapped linearly from [lo, hi] to
/// 1..255; unknown cells are 0 and +inf is 255. A sidecar `<path>.txt`
/// records the scaling and `legend` lines.
void write_pgm(const std::filesystem::path& path, std::span<const float> cells, int width,
               int height, double lo, double hi, const std::vector<std::string>& legend = {});

template <class Tag>
void write_pgm(const std::filesystem::path& path, const Grid<Tag>& grid, double lo, double hi,
               const std::vector<std::string>& legend = {}) {
  write_pgm(path, grid.cells(), grid.width(), grid.height(), lo, hi, legend);
}

}  // namespace strata
