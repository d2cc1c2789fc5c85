#include <doctest.h>

#include <cmath>
#include <set>
#include <stdexcept>
#include <vector>

#include "sweepcert/distance.hpp"
#include "sweepcert/generators.hpp"
#include "sweepcert/smallvol.hpp"
#include "sweepcert/sweep.hpp"

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

// Bottom grid row of gen_flat_torus(n): an annulus of width 1/n going all
// the way around.
Region torus_strip(int n) {
  Region r;
  for (int t = 0; t < 2 * n; ++t) r.tris.push_back(t);
  return r;
}

bool same_tris(const Region& a, const Region& b) {
  std::set<int> sa(a.tris.begin(), a.tris.end());
  std::set<int> sb(b.tris.begin(), b.tris.end());
  return sa == sb;
}

} // namespace

TEST_CASE("staged budgets stay under the log envelope") {
  double d = 0.01;
  CHECK(small_volume_plan(1, d) == doctest::Approx(6 * d).epsilon(1e-15));
  CHECK(small_volume_plan(100, d) == doctest::Approx(204 * d).epsilon(1e-15));
  CHECK(small_volume_plan(50, d) == doctest::Approx(104 * d).epsilon(1e-15));

  std::vector<int> ks;
  for (int k = 1; k <= 200; ++k) ks.push_back(k);
  for (int k : {500, 5000, 10000, 1000000}) ks.push_back(k);
  for (int k : ks) {
    double plan = small_volume_plan(k, d);
    CHECK(plan > 0);
    CHECK(plan <= small_volume_bound(k, d));
  }
  CHECK(small_volume_plan(5000, d) > small_volume_plan(100, d));
}

TEST_CASE("scale solver honors the envelope") {
  auto envelope = [](double area, double dl) {
    return 500.0 * std::log(12.0 * area / (dl * dl) + 2.0) * dl;
  };
  double prev = kInf;
  for (double eps : {0.5, 0.1, 0.01}) {
    double d = small_volume_delta(1.0, eps);
    CHECK(d > 0);
    CHECK(envelope(1.0, d) <= eps);
    CHECK(envelope(1.0, d * 1.001) > eps);
    CHECK(d < prev);
    prev = d;
  }
}

TEST_CASE("a single marked spot sweeps as one ball") {
  ConformalSurface s = gen_flat_torus(32);
  Region u = star_of(s, 0);
  double delta = 0.15;
  REQUIRE(u.orig_area(s) < delta * delta);

  SmallVolumeSweep out = small_volume_sweep_delta(s, u, delta);
  CHECK(out.ball_count == 1);
  CHECK(out.stages.size() == 1);
  CHECK(out.tube_cuts == 0);
  CHECK(out.cover_radius <= delta / 3 + 1e-12);
  CHECK(out.stages[0].cut_len == 0);
  CHECK(out.surf.nt() == s.nt());
  CHECK(out.lip <= 1.0 + 1e-9);
  CHECK(verify_monotone(out.surf, out.f).ok);
  CHECK(out.width_bound <= 4 * delta * out.lip * 1.02);
  CHECK(out.width_bound <= out.bound);
  CHECK(out.bound ==
        doctest::Approx(500.0 * std::log(2.0) * delta).epsilon(1e-12));
  CHECK(same_tris(out.map_region(u), out.domain));
  CHECK(same_tris(out.f.domain, out.domain));
}

TEST_CASE("separated marks sweep without interacting") {
  int n = 32;
  ConformalSurface s = gen_flat_torus(n);
  std::vector<int> marks = {0, 16, 8 * n + 24, 16 * n + 0, 16 * n + 16,
                            24 * n + 8};
  Region u;
  for (int v : marks) u = u.set_union(star_of(s, v));
  // delta/3 must exceed the star diameter (2 sqrt(2)/n) so one ball takes a
  // whole cluster no matter which cluster vertex the net picks, while the
  // balls stay well clear of foreign clusters (hub spacing sqrt(2)/4).
  double delta = 0.28;
  REQUIRE(u.orig_area(s) < delta * delta);

  SmallVolumeSweep out = small_volume_sweep_delta(s, u, delta);
  CHECK(out.ball_count == 6);
  CHECK(out.stages.size() == 6);
  CHECK(out.tube_cuts == 0);
  CHECK(out.cover_radius <= delta / 3 + 1e-12);
  for (const BallStage& st : out.stages) {
    CHECK(st.cut_len == 0);
    CHECK(st.radius >= delta / 2);
    CHECK(st.radius <= delta);
    CHECK(st.chart_lip <= 1.0 + 1e-9);
  }
  CHECK(out.surf.nt() == s.nt());
  CHECK(verify_monotone(out.surf, out.f).ok);
  CHECK(out.width_bound < 0.25);
  CHECK(out.width_bound <= out.bound);
  CHECK(same_tris(out.map_region(u), out.domain));
  CHECK(out.surf.nv() - out.surf.ne() + out.surf.nt() == 0);
}

TEST_CASE("a connected strip merges ball by ball with short cuts") {
  ConformalSurface s = gen_flat_torus(32);
  Region u = torus_strip(32);
  double delta = 0.2;
  REQUIRE(u.orig_area(s) < delta * delta);

  SmallVolumeSweep out = small_volume_sweep_delta(s, u, delta);
  CHECK(out.ball_count >= 8);
  CHECK(out.ball_count <= 20);
  CHECK(out.tube_cuts == 0);
  CHECK(out.stages.size() >= 2);
  bool any_cut = false;
  for (const BallStage& st : out.stages) {
    CHECK(st.cut_len <= 2 * delta * 1.02);
    any_cut = any_cut || st.cut_len > 0;
  }
  CHECK(any_cut);
  CHECK(verify_monotone(out.surf, out.f).ok);
  CHECK(out.width_bound <=
        small_volume_plan(out.ball_count, delta) * out.lip * 1.02);
  CHECK(out.width_bound <= out.bound);
  CHECK(out.width_measured <= out.width_bound + 1e-12);
  CHECK(out.surf.total_orig_area == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(out.surf.nv() - out.surf.ne() + out.surf.nt() == 0);
  CHECK(same_tris(out.map_region(u), out.domain));
  CHECK(same_tris(out.f.domain, out.domain));
}

TEST_CASE("crowding forces a tube split first") {
  ConformalSurface s = gen_flat_torus(32);
  Region u = torus_strip(32);
  double delta = 0.2;
  SmallVolumeOptions opt;
  opt.fanout = 4;

  SmallVolumeSweep out = small_volume_sweep_delta(s, u, delta, opt);
  CHECK(out.ball_count > 4);
  CHECK(out.tube_cuts >= 1);
  CHECK(verify_monotone(out.surf, out.f).ok);
  CHECK(out.width_bound <= out.bound);
  CHECK(out.width_bound < 3.0);
  for (const BallStage& st : out.stages) CHECK(st.cut_len <= 2 * delta * 1.02);
  CHECK(same_tris(out.map_region(u), out.domain));
  CHECK(out.surf.nv() - out.surf.ne() + out.surf.nt() == 0);
}

TEST_CASE("small volume sweeps replay deterministically") {
  ConformalSurface s = gen_flat_torus(32);
  Region u = torus_strip(32);
  SmallVolumeSweep a = small_volume_sweep_delta(s, u, 0.2);
  SmallVolumeSweep b = small_volume_sweep_delta(s, u, 0.2);
  CHECK(a.ball_count == b.ball_count);
  CHECK(a.width_bound == b.width_bound);
  CHECK(a.width_measured == b.width_measured);
  REQUIRE(a.stages.size() == b.stages.size());
  for (size_t i = 0; i < a.stages.size(); ++i) {
    CHECK(a.stages[i].center == b.stages[i].center);
    CHECK(a.stages[i].radius == b.stages[i].radius);
    CHECK(a.stages[i].cut_len == b.stages[i].cut_len);
  }
}

TEST_CASE("small volume guards reject bad inputs") {
  ConformalSurface s = gen_flat_torus(16);
  CHECK_THROWS_AS(small_volume_sweep_delta(s, Region::whole(s), 0.5),
                  std::invalid_argument);
  CHECK_THROWS_AS(small_volume_sweep_delta(s, Region{}, 0.15),
                  std::invalid_argument);
  CHECK_THROWS_AS(small_volume_sweep_delta(s, star_of(s, 0), 0.0),
                  std::invalid_argument);
  SmallVolumeOptions bad;
  bad.fanout = 1;
  CHECK_THROWS_AS(small_volume_sweep_delta(s, star_of(s, 0), 0.15, bad),
                  std::invalid_argument);
  CHECK_THROWS_AS(small_volume_plan(0, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(small_volume_plan(5, 0.1, 1), std::invalid_argument);
  CHECK_THROWS_AS(small_volume_bound(-1, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(small_volume_delta(0.0, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(small_volume_delta(1.0, 0.0), std::invalid_argument);
}
