#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sweepcert/cycle.hpp"
#include "sweepcert/distance.hpp"
#include "sweepcert/generators.hpp"
#include "sweepcert/refine.hpp"
#include "sweepcert/sweep.hpp"

using namespace sweepcert;

namespace {

SweepFunction vertex_sweep(const ConformalSurface& s, const std::vector<double>& vv) {
  SweepFunction f;
  f.domain = Region::whole(s);
  f.vals.resize(s.nt());
  for (int t = 0; t < s.nt(); ++t)
    for (int c = 0; c < 3; ++c) f.vals[t][c] = vv[s.tris[t].v[c]];
  return f;
}

int euler_characteristic(const ConformalSurface& s) {
  return s.nv() - s.ne() + s.nt();
}

void check_cut_consistency(const ConformalSurface& s, const SweepFunction& f,
                           const LevelCut& cut) {
  const ConformalSurface& r = cut.surf;
  CHECK(euler_characteristic(r) == euler_characteristic(s));
  CHECK(r.total_model_area == doctest::Approx(s.total_model_area).epsilon(1e-10));

  // children tile their parents
  std::vector<char> seen(r.nt(), 0);
  for (int T = 0; T < s.nt(); ++T) {
    REQUIRE(!cut.map.tri_children[T].empty());
    for (int c : cut.map.tri_children[T]) {
      CHECK(cut.map.tri_parent[c] == T);
      seen[c] = 1;
    }
  }
  CHECK(std::count(seen.begin(), seen.end(), 1) == r.nt());

  // split edges keep their exact scaled length
  for (int e = 0; e < s.ne(); ++e) {
    double sum = 0;
    for (int p : cut.map.edge_pieces[e]) sum += r.edges[p].orig_len;
    CHECK(sum == doctest::Approx(s.edges[e].orig_len).epsilon(1e-12));
  }

  // the domain splits into the two strict level sides
  Region dom = cut.map.map_region(f.domain);
  Region both = cut.below;
  both.tris.insert(both.tris.end(), cut.above.tris.begin(), cut.above.tris.end());
  both.normalize();
  CHECK(both.tris == dom.tris);
  CHECK(cut.below.tris.size() + cut.above.tris.size() == dom.tris.size());
}

} // namespace

TEST_CASE("level cut slices the flat torus along a row line") {
  int n = 8;
  ConformalSurface s = gen_flat_torus(n);
  // one value per row, discontinuous across the wrap seam
  SweepFunction f;
  f.domain = Region::whole(s);
  f.vals.resize(s.nt());
  std::vector<int> seam;
  for (int t = 0; t < s.nt(); ++t) {
    int j = (t / 2) / n;
    f.vals[t] = (t % 2 == 0) ? std::array<double, 3>{double(j), double(j), double(j) + 1}
                             : std::array<double, 3>{double(j), double(j) + 1, double(j) + 1};
  }
  for (int e = 0; e < s.ne(); ++e) {
    const Edge& ed = s.edges[e];
    int ja = (ed.s0.tri / 2) / n, jb = (ed.s1.tri / 2) / n;
    if ((ja == 0 && jb == n - 1) || (ja == n - 1 && jb == 0)) seam.push_back(e);
  }
  f.jump_edges = seam;
  f.gamma_edges = seam;
  REQUIRE(verify_monotone(s, f).ok);

  LevelCut cut = insert_level_cut(s, f, 3.5);
  check_cut_consistency(s, f, cut);

  CHECK(int(cut.cut_edges.size()) == 2 * n);
  double cut_len = 0;
  for (int e : cut.cut_edges) cut_len += cut.surf.edges[e].orig_len;
  CHECK(cut_len == doctest::Approx(1.0).epsilon(1e-12));

  CHECK(int(cut.below.tris.size()) == 9 * n);
  CHECK(int(cut.above.tris.size()) == 11 * n);

  // both sides meet exactly along the cut and the seam
  std::vector<int> expect = cut.cut_edges;
  for (int e : seam)
    for (int p : cut.map.edge_pieces[e]) expect.push_back(p);
  std::sort(expect.begin(), expect.end());
  CHECK(cut.below.boundary_edges(cut.surf) == expect);
  CHECK(cut.above.boundary_edges(cut.surf) == expect);
}

TEST_CASE("level cut matches the measured level cycle") {
  SUBCASE("bumpy torus distance level") {
    ConformalSurface s = gen_bumpy_torus(8, 0.25, 7);
    DistanceField df = distance_field(s, {0}, 3);
    SweepFunction f = vertex_sweep(s, df.vertex_dist);
    WidthProfile prof = width_profile(s, f);
    size_t iv = prof.intervals.size() / 2;
    while (prof.intervals[iv].t1 - prof.intervals[iv].t0 < 1e-6) ++iv;
    double t = 0.5 * (prof.intervals[iv].t0 + prof.intervals[iv].t1);

    double level_len = level_cycle(s, f, t).orig_length(s);
    LevelCut cut = insert_level_cut(s, f, t);
    check_cut_consistency(s, f, cut);
    CHECK(cut.surf.total_orig_area ==
          doctest::Approx(s.total_orig_area).epsilon(5e-3));

    double cut_len = 0;
    for (int e : cut.cut_edges) cut_len += cut.surf.edges[e].orig_len;
    CHECK(cut_len == doctest::Approx(level_len).epsilon(1e-12));

    // below is exactly the open metric ball: area grows with the level
    CHECK(cut.below.orig_area(cut.surf) > 0.0);
    CHECK(cut.below.orig_area(cut.surf) < cut.surf.total_orig_area);
    CHECK(cut.below.boundary_edges(cut.surf) == cut.cut_edges);
  }
  SUBCASE("hyperbolic distance level") {
    ConformalSurface s = gen_bolza(2);
    DistanceField df = distance_field(s, {0}, 3);
    SweepFunction f = vertex_sweep(s, df.vertex_dist);
    WidthProfile prof = width_profile(s, f);
    size_t iv = prof.intervals.size() / 2;
    while (prof.intervals[iv].t1 - prof.intervals[iv].t0 < 1e-6) ++iv;
    double t = 0.5 * (prof.intervals[iv].t0 + prof.intervals[iv].t1);

    double level_len = level_cycle(s, f, t).orig_length(s);
    LevelCut cut = insert_level_cut(s, f, t);
    check_cut_consistency(s, f, cut);
    CHECK(cut.surf.genus == 2);

    double cut_len = 0;
    for (int e : cut.cut_edges) cut_len += cut.surf.edges[e].orig_len;
    CHECK(cut_len == doctest::Approx(level_len).epsilon(2e-3));
  }
}

TEST_CASE("level cut of the sphere produces a latitude circle") {
  std::vector<Vec3> pos;
  ConformalSurface s = gen_sphere(2, &pos);
  std::vector<double> height(s.nv());
  for (int v = 0; v < s.nv(); ++v) height[v] = pos[v].z;
  SweepFunction f = vertex_sweep(s, height);

  double z = 0.1234 * kSphereRadius;
  LevelCut cut = insert_level_cut(s, f, z);
  check_cut_consistency(s, f, cut);
  CHECK(cut.surf.genus == 0);

  double cut_len = 0;
  for (int e : cut.cut_edges) cut_len += cut.surf.edges[e].orig_len;
  double circle = 2.0 * kPi * std::sqrt(kSphereRadius * kSphereRadius - z * z);
  CHECK(cut_len >= 0.98 * circle);
  CHECK(cut_len <= 1.005 * circle);
}

TEST_CASE("level cut rejects levels through corners") {
  ConformalSurface s = gen_flat_torus(4);
  DistanceField df = distance_field(s, {0}, 3);
  SweepFunction f = vertex_sweep(s, df.vertex_dist);
  CHECK_THROWS_AS(insert_level_cut(s, f, df.vertex_dist[5]), std::invalid_argument);
}
