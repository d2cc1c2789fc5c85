#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <stdexcept>

#include "sweepcert/planar.hpp"
#include "sweepcert/sweep.hpp"

using namespace sweepcert;

static PlanarRegion rect_region(double x0, double y0, double x1, double y1) {
  PlanarRegion p;
  p.rings.push_back({{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}});
  return p;
}

static PlanarRegion random_polyomino(std::mt19937_64& rng, int ncells,
                                     double scale) {
  std::set<std::pair<int, int>> s{{0, 0}};
  while ((int)s.size() < ncells) {
    std::set<std::pair<int, int>> nb;
    for (const auto& [x, y] : s) {
      if (!s.count({x + 1, y})) nb.insert({x + 1, y});
      if (!s.count({x - 1, y})) nb.insert({x - 1, y});
      if (!s.count({x, y + 1})) nb.insert({x, y + 1});
      if (!s.count({x, y - 1})) nb.insert({x, y - 1});
    }
    auto it = nb.begin();
    std::advance(it, (long)(rng() % nb.size()));
    s.insert(*it);
  }
  std::vector<std::array<int, 2>> cells;
  for (const auto& [x, y] : s) cells.push_back({x, y});
  return polyomino_region(cells, scale);
}

TEST_CASE("polyomino boundaries are simple rectilinear rings") {
  PlanarRegion one = polyomino_region({{0, 0}});
  REQUIRE(one.rings.size() == 1);
  CHECK(one.rings[0].size() == 4);
  CHECK(one.area() == doctest::Approx(1.0));

  PlanarRegion block = polyomino_region({{0, 0}, {1, 0}, {0, 1}, {1, 1}});
  REQUIRE(block.rings.size() == 1);
  CHECK(block.rings[0].size() == 4);
  CHECK(block.area() == doctest::Approx(4.0));

  std::vector<std::array<int, 2>> donut;
  for (int x = 0; x < 3; ++x)
    for (int y = 0; y < 3; ++y)
      if (x != 1 || y != 1) donut.push_back({x, y});
  PlanarRegion d = polyomino_region(donut);
  REQUIRE(d.rings.size() == 2);
  CHECK(d.area() == doctest::Approx(8.0));
  CHECK(d.is_rectilinear());
  CHECK(d.contains(0.5, 0.5));
  CHECK_FALSE(d.contains(1.5, 1.5));

  PlanarRegion checker = polyomino_region({{0, 0}, {1, 1}});
  REQUIRE(checker.rings.size() == 2);
  CHECK(checker.rings[0].size() == 4);
  CHECK(checker.rings[1].size() == 4);
  CHECK(checker.area() == doctest::Approx(2.0));
}

TEST_CASE("line measure ignores boundary segments on the line") {
  PlanarRegion ell = polyomino_region({{0, 0}, {1, 0}, {0, 1}});
  double tol = 1e-12;
  CHECK(line_measure(ell, 0, 0.5, tol) == doctest::Approx(2.0));
  CHECK(line_measure(ell, 0, 1.5, tol) == doctest::Approx(1.0));
  CHECK(line_measure(ell, 0, 1.0, tol) == doctest::Approx(1.0));
  CHECK(line_measure(ell, 0, 0.0, tol) == doctest::Approx(0.0));
  CHECK(line_measure(ell, 0, 2.0, tol) == doctest::Approx(0.0));
  CHECK(line_measure(ell, 1, 1.0, tol) == doctest::Approx(1.0));
  CHECK(line_measure(ell, 1, 0.25, tol) == doctest::Approx(2.0));
  CHECK(line_measure(ell, 0, -1.0, tol) == doctest::Approx(0.0));
}

TEST_CASE("offset search lands on the averaging bound for aligned squares") {
  PlanarRegion sq = rect_region(0, 0, 1, 1);
  GridOffset o1 = grid_offset_search(sq, 1.0);
  CHECK(o1.skel_len == doctest::Approx(0.0));
  CHECK(grid_intersection_length(sq, 1.0, o1.ox, o1.oy) ==
        doctest::Approx(0.0));

  GridOffset oh = grid_offset_search(sq, 0.5);
  CHECK(oh.skel_len == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(oh.skel_len <= 2.0 * sq.area() / 0.5 + 1e-12);
}

TEST_CASE("exhaustive offset scan never beats the breakpoint optimum") {
  std::mt19937_64 rng(2025);
  for (int trial = 0; trial < 6; ++trial) {
    PlanarRegion p = random_polyomino(rng, 8 + (int)(rng() % 20), 1.0);
    double cell = 0.5;
    GridOffset ex = grid_offset_search(p, cell);
    CHECK(ex.skel_len <= 2.0 * p.area() / cell + 1e-9);
    CHECK(grid_intersection_length(p, cell, ex.ox, ex.oy) ==
          doctest::Approx(ex.skel_len).epsilon(1e-12));
    double oracle = std::numeric_limits<double>::infinity();
    int n = 40;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        oracle = std::min(oracle, grid_intersection_length(
                                      p, cell, cell * i / n, cell * j / n));
    CHECK(ex.skel_len <= oracle + 1e-9);
    // integer vertices, cell 1/2: every breakpoint is on the scan lattice
    CHECK(ex.skel_len == doctest::Approx(oracle).epsilon(1e-9));
  }
}

TEST_CASE("grid sweepout of the unit square is a single sliding segment") {
  PlanarRegion sq = rect_region(0, 0, 1, 1);
  GuthSweep gs = guth_sweep(sq);
  CHECK(verify_monotone(gs.surf, gs.f).ok);
  CHECK(gs.surf.total_orig_area == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(gs.skel_len == doctest::Approx(0.0));
  CHECK(gs.width_free == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(gs.width_total == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(gs.width_total <= 3.0 * std::sqrt(sq.area()) * (1.0 + 1e-9));
}

TEST_CASE("thin strips sweep for their height, not their area root") {
  PlanarRegion strip = rect_region(0, 0, 1, 0.01);
  GuthSweep gs = guth_sweep(strip);
  CHECK(verify_monotone(gs.surf, gs.f).ok);
  CHECK(gs.width_total <= 0.01 * (1.0 + 1e-9));
  CHECK(gs.width_total <= 3.0 * std::sqrt(strip.area()));
}

TEST_CASE("distant components never light up together") {
  PlanarRegion two = rect_region(0, 0, 1, 1);
  two.rings.push_back({{5, 0}, {6, 0}, {6, 1}, {5, 1}});
  CHECK(two.area() == doctest::Approx(2.0));
  GuthSweep gs = guth_sweep(two);
  CHECK(verify_monotone(gs.surf, gs.f).ok);
  WidthProfile prof = width_profile(gs.surf, gs.f);
  CHECK(prof.max_free_measured() <= 1.0 + 1e-9);
  CHECK(gs.width_total <= 3.0 * std::sqrt(2.0) * (1.0 + 1e-9));
}

TEST_CASE("grid sweepout certificates stay under three roots of the area") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 10; ++trial) {
    double scale = std::ldexp(1.0, (int)(rng() % 9) - 4);
    PlanarRegion p = random_polyomino(rng, 10 + (int)(rng() % 40), scale);
    double a = p.area();
    GuthSweep gs = guth_sweep(p);
    CHECK(verify_monotone(gs.surf, gs.f).ok);
    CHECK(gs.surf.total_orig_area == doctest::Approx(a).epsilon(1e-9));
    CHECK(gs.width_free <= gs.cell * (1.0 + 1e-9));
    CHECK(gs.skel_len <= 2.0 * a / gs.cell + 1e-9 * gs.cell);
    CHECK(gs.skel_len ==
          doctest::Approx(gs.offset.skel_len).epsilon(1e-7).scale(gs.cell));
    CHECK(gs.width_total <= 3.0 * std::sqrt(a) * (1.0 + 1e-9));
  }
}

TEST_CASE("scaling the region scales the certificate exactly") {
  std::mt19937_64 rng(5150);
  PlanarRegion p = random_polyomino(rng, 23, 1.0);
  GuthSweep base = guth_sweep(p);
  for (double c : {0.25, 4.0}) {
    PlanarRegion q = p;
    for (auto& ring : q.rings)
      for (auto& v : ring) {
        v[0] *= c;
        v[1] *= c;
      }
    GuthSweep gs = guth_sweep(q);
    CHECK(gs.width_free ==
          doctest::Approx(c * base.width_free).epsilon(1e-14));
    CHECK(gs.width_total ==
          doctest::Approx(c * base.width_total).epsilon(1e-14));
    CHECK(gs.skel_len == doctest::Approx(c * base.skel_len).epsilon(1e-14));
  }
}

TEST_CASE("grid sweepout rejects slanted regions") {
  PlanarRegion diamond;
  diamond.rings.push_back({{1, 0}, {2, 1}, {1, 2}, {0, 1}});
  CHECK_FALSE(diamond.is_rectilinear());
  CHECK_THROWS_AS(guth_sweep(diamond), std::invalid_argument);
}
