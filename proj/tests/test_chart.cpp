#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "sweepcert/chart.hpp"
#include "sweepcert/distance.hpp"
#include "sweepcert/generators.hpp"

using namespace sweepcert;

namespace {

Region star_of(const ConformalSurface& s, int v) {
  Region r;
  for (int t = 0; t < s.nt(); ++t)
    for (int c = 0; c < 3; ++c)
      if (s.tris[t].v[c] == v) {
        r.tris.push_back(t);
        break;
      }
  r.normalize();
  return r;
}

Region cap_around(const ConformalSurface& s, const std::vector<Vec3>& pos,
                  int v, double dist) {
  double R = std::sqrt(model_dot(Model::Spherical, pos[v], pos[v]));
  Region r;
  for (int t = 0; t < s.nt(); ++t) {
    double d = kInf;
    for (int c = 0; c < 3; ++c) {
      double co = model_dot(Model::Spherical, pos[s.tris[t].v[c]], pos[v]) / (R * R);
      d = std::min(d, R * std::acos(std::clamp(co, -1.0, 1.0)));
    }
    if (d <= dist) r.tris.push_back(t);
  }
  r.normalize();
  return r;
}

} // namespace

TEST_CASE("flat torus charts are isometric at small scales") {
  ConformalSurface s = gen_flat_torus(16);
  ChartCover cover = chart_extract(s, Region::whole(s), 0.2);

  CHECK(cover.retries == 0);
  CHECK(cover.delta == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(cover.cover_radius <= 0.1 + 1e-12);
  CHECK(cover.charts.size() >= 10);
  CHECK(cover.charts.size() <= 200);

  std::set<int> covered;
  for (const Chart& ch : cover.charts) {
    CHECK(ch.lip <= 1.0 + 1e-12);
    CHECK(ch.radius < 0.35);
    const auto& pc = ch.vertex_pos(ch.center);
    CHECK(std::abs(pc[0]) < 1e-15);
    CHECK(std::abs(pc[1]) < 1e-15);
    CHECK(ch.verts.size() == ch.pos.size());
    CHECK(std::is_sorted(ch.verts.begin(), ch.verts.end()));
    covered.insert(ch.region.tris.begin(), ch.region.tris.end());
  }
  CHECK((int)covered.size() == s.nt());
}

TEST_CASE("charts develop disconnected pieces side by side") {
  ConformalSurface s = gen_flat_torus(16);
  int far_v = 8 * 16 + 8; // grid (8,8), half a diagonal away from vertex 0
  Region star0 = star_of(s, 0);
  Region star1 = star_of(s, far_v);
  Region both = star0.set_union(star1);

  Chart ch = chart_around(s, both, 0);
  CHECK(ch.lip <= 1.0 + 1e-9);
  std::vector<int> nv = star0.vertex_set(s);
  std::set<int> near(nv.begin(), nv.end());
  double near_hi = -kInf, far_lo = kInf;
  for (size_t i = 0; i < ch.verts.size(); ++i) {
    if (near.count(ch.verts[i])) {
      CHECK(std::abs(ch.pos[i][0]) < 0.1);
      CHECK(std::abs(ch.pos[i][1]) < 0.1);
      near_hi = std::max(near_hi, ch.pos[i][0]);
    } else {
      far_lo = std::min(far_lo, ch.pos[i][0]);
    }
  }
  CHECK(far_lo > near_hi + 0.01);
}

TEST_CASE("spherical caps report honest distortion") {
  std::vector<Vec3> pos;
  ConformalSurface s = gen_sphere(3, &pos);
  Region cap = cap_around(s, pos, 0, 0.22);
  REQUIRE(!cap.empty());

  Chart ch = chart_around(s, cap, 0);
  CHECK(ch.lip > 1.02);
  CHECK(ch.lip < 1.25);
  CHECK(ch.radius > 0.2);
}

TEST_CASE("distortion gate halves the scale until certified") {
  std::vector<Vec3> pos;
  ConformalSurface s = gen_sphere(3, &pos);
  Region cap = cap_around(s, pos, 0, 0.25);

  ChartCover cover = chart_extract(s, cap, 0.2, 1.01, 5);
  CHECK(cover.retries >= 2);
  CHECK(cover.retries <= 5);
  CHECK(cover.delta >= 0.012);
  CHECK(cover.delta <= 0.051);
  CHECK(cover.cover_radius <= cover.delta / 2 + 1e-12);
  for (const Chart& ch : cover.charts) CHECK(ch.lip <= 1.01);
}

TEST_CASE("too coarse a mesh fails the gate honestly") {
  ConformalSurface s = gen_sphere(2);
  CHECK_THROWS_AS(chart_extract(s, Region::whole(s), 0.2, 1.002, 4),
                  std::runtime_error);
}

TEST_CASE("chart construction rejects bad arguments") {
  ConformalSurface s = gen_flat_torus(8);
  CHECK_THROWS_AS(chart_around(s, Region{}, 0), std::invalid_argument);
  Region star0 = star_of(s, 0);
  CHECK_THROWS_AS(chart_around(s, star0, 5 * 8 + 5), std::invalid_argument);
  Chart ch = chart_around(s, star0, 0);
  CHECK_THROWS_AS(ch.vertex_pos(5 * 8 + 5), std::invalid_argument);
  CHECK_THROWS_AS(chart_extract(s, Region::whole(s), -1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(chart_extract(s, Region{}, 0.1), std::invalid_argument);
}
