#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "strata/gridmap.hpp"

using namespace strata;

namespace {

HeightGrid parse(const std::string& text) {
  std::istringstream in(text);
  return parse_height_map(in);
}

// Independent kernel oracle: explicit weight table over the 4x4 window.
double oracle_subsample(const HeightGrid& g, int col, int row, double* mass_out) {
  const double w1[4] = {1.0 / 8, 3.0 / 8, 3.0 / 8, 1.0 / 8};
  double sum = 0.0, mass = 0.0;
  for (int v = 0; v < 4; ++v)
    for (int u = 0; u < 4; ++u) {
      const GridIndex c{2 * col - 1 + u, 2 * row - 1 + v};
      if (!g.known(c)) continue;
      sum += w1[u] * w1[v] * g[c];
      mass += w1[u] * w1[v];
    }
  if (mass_out) *mass_out = mass;
  return mass > 0 ? sum / mass : NAN;
}

}  // namespace

TEST_SUITE("gridmap") {
  TEST_CASE("hmap parse keeps unknown cells") {
    const HeightGrid g = parse("HMAP 2 2 0.025 0 0\n0.0 0.1\nnan 0.2\n");
    CHECK(g.width() == 2);
    CHECK(g.resolution() == doctest::Approx(0.025));
    CHECK(g.known({0, 0}));
    CHECK_FALSE(g.known({0, 1}));
    CHECK(g[{1, 1}] == doctest::Approx(0.2));
    CHECK(g[{1, 0}] == doctest::Approx(0.1));
  }

  TEST_CASE("hmap parse errors name the line") {
    try {
      parse("HMAP 2 2 0.025 0 0\n0.0 0.1\n0.3\n");
      FAIL("ragged rows accepted");
    } catch (const ParseError& e) {
      CHECK(e.line() == 3);
    }
    CHECK_THROWS_AS(parse("HMAP 2 2 -1 0 0\n0 0\n0 0\n"), ParseError);
    CHECK_THROWS_AS(parse("HMAP 2 2 0.1 0 0\n0 inf\n0 0\n"), ParseError);
    CHECK_THROWS_AS(parse("HMAP 2 2 0.1 0 0\n0 0\n"), ParseError);
  }

  TEST_CASE("hmap write and parse round trip") {
    HeightGrid g(3, 2, 0.05, {1.0, -2.0});
    g[{0, 0}] = 0.125f;
    g[{2, 1}] = -0.5f;
    g[{1, 1}] = 0.0f;
    std::ostringstream out;
    write_height_map(out, g);
    const HeightGrid back = parse(out.str());
    CHECK(back.origin().x == doctest::Approx(1.0));
    CHECK(back[{0, 0}] == doctest::Approx(0.125));
    CHECK(back[{2, 1}] == doctest::Approx(-0.5));
    CHECK_FALSE(back.known({1, 0}));
  }

  TEST_CASE("index and world round trip") {
    const HeightGrid g(40, 30, 0.025, {0.3, -0.7});
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> ux(0.3, 0.3 + 39 * 0.025), uy(-0.7, -0.7 + 29 * 0.025);
    for (int i = 0; i < 200; ++i) {
      const WorldPoint p{ux(rng), uy(rng)};
      const WorldPoint q = g.world_of(g.index_of(p));
      CHECK(std::abs(q.x - p.x) <= 0.0125 + 1e-12);
      CHECK(std::abs(q.y - p.y) <= 0.0125 + 1e-12);
    }
  }

  TEST_CASE("height differences") {
    HeightGrid flat(6, 5, 0.025, {0, 0}, 0.5f);
    const DiffGrid df = height_diff_map(flat);
    for (float v : df.cells()) CHECK(v == 0.0f);

    HeightGrid two(2, 3, 0.025, {0, 0}, 0.0f);
    for (int r = 0; r < 3; ++r) two[{1, r}] = 0.15f;
    const DiffGrid dt = height_diff_map(two);
    for (float v : dt.cells()) CHECK(v == doctest::Approx(0.15));

    HeightGrid spike(5, 5, 0.025, {0, 0}, 0.0f);
    spike[{2, 2}] = 0.3f;
    const DiffGrid d = height_diff_map(spike);
    for (int r = 0; r < 5; ++r)
      for (int c = 0; c < 5; ++c) {
        const bool near = std::abs(c - 2) <= 1 && std::abs(r - 2) <= 1;
        CHECK(d[{c, r}] == doctest::Approx(near ? 0.3 : 0.0));
      }
  }

  TEST_CASE("height differences: brute force and translation invariance") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<float> u(0.0f, 0.2f);
    HeightGrid g(9, 7, 0.025, {0, 0});
    for (float& v : g.cells()) v = u(rng);
    g[{3, 3}] = kUnknown;
    g[{0, 6}] = kUnknown;
    const DiffGrid d = height_diff_map(g);
    for (int r = 0; r < 7; ++r)
      for (int c = 0; c < 9; ++c) {
        if (!g.known({c, r})) {
          CHECK_FALSE(d.known({c, r}));
          continue;
        }
        double best = 0.0;
        for (int dr = -1; dr <= 1; ++dr)
          for (int dc = -1; dc <= 1; ++dc)
            if (g.known({c + dc, r + dr})) best = std::max(best, double(std::abs(g[{c + dc, r + dr}] - g[{c, r}])));
        CHECK(d[{c, r}] == doctest::Approx(best));
      }
    HeightGrid shifted = g;
    for (float& v : shifted.cells()) v += 1.5f;
    const DiffGrid d2 = height_diff_map(shifted);
    for (std::size_t i = 0; i < d.cells().size(); ++i)
      if (!std::isnan(d.cells()[i])) CHECK(d2.cells()[i] == doctest::Approx(d.cells()[i]).epsilon(1e-4));
  }

  TEST_CASE("subsample kernel") {
    CHECK(kBinomialRow[1] * kBinomialRow[1] == doctest::Approx(9.0 / 64));

    HeightGrid c(8, 8, 0.025, {0, 0}, 0.7f);
    const HeightGrid s = subsample(c);
    CHECK(s.resolution() == doctest::Approx(0.05));
    CHECK(s.width() == 4);
    for (float v : s.cells()) CHECK(v == doctest::Approx(0.7));

    // Unit impulse at an inner fine cell reads back its kernel weight.
    HeightGrid imp(8, 8, 0.025, {0, 0}, 0.0f);
    imp[{4, 4}] = 1.0f;
    CHECK(subsample(imp)[{2, 2}] == doctest::Approx(9.0 / 64));

    // One known cell in the window: its value, but too little mass.
    HeightGrid lone(8, 8, 0.025, {0, 0});
    lone[{4, 4}] = 0.2f;
    const SubsampledCell cell = subsample_cell(lone, 2, 2);
    CHECK(cell.value == doctest::Approx(0.2));
    CHECK(cell.known_mass < kMinKnownMass);
    CHECK_FALSE(subsample(lone).known({2, 2}));

    const HeightGrid twice = subsample(subsample(c));
    CHECK(twice.resolution() == doctest::Approx(0.1));
  }

  TEST_CASE("subsample matches the explicit kernel, is linear and convex") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<float> u(-0.3f, 0.3f);
    HeightGrid a(11, 9, 0.025, {0, 0}), b(11, 9, 0.025, {0, 0});
    for (float& v : a.cells()) v = u(rng);
    for (float& v : b.cells()) v = u(rng);
    const HeightGrid sa = subsample(a), sb = subsample(b);
    HeightGrid mix = a;
    for (std::size_t i = 0; i < mix.cells().size(); ++i) mix.cells()[i] = 2.0f * a.cells()[i] - 0.5f * b.cells()[i];
    const HeightGrid sm = subsample(mix);
    for (int r = 0; r < sa.height(); ++r)
      for (int c = 0; c < sa.width(); ++c) {
        double mass = 0;
        const double o = oracle_subsample(a, c, r, &mass);
        if (mass < kMinKnownMass) {
          CHECK_FALSE(sa.known({c, r}));
          continue;
        }
        CHECK(sa[{c, r}] == doctest::Approx(o).epsilon(1e-5));
        CHECK(sm[{c, r}] == doctest::Approx(2.0 * sa[{c, r}] - 0.5 * sb[{c, r}]).epsilon(1e-4));
        float lo = 1e9f, hi = -1e9f;
        for (int v = -1; v <= 2; ++v)
          for (int w = -1; w <= 2; ++w)
            if (a.known({2 * c + w, 2 * r + v})) {
              lo = std::min(lo, a[{2 * c + w, 2 * r + v}]);
              hi = std::max(hi, a[{2 * c + w, 2 * r + v}]);
            }
        CHECK(sa[{c, r}] >= lo - 1e-6f);
        CHECK(sa[{c, r}] <= hi + 1e-6f);
      }
  }
}
