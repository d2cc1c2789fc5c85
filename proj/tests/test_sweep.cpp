#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <vector>

#include "sweepcert/distance.hpp"
#include "sweepcert/generators.hpp"
#include "sweepcert/sweep.hpp"

using namespace sweepcert;

namespace {

std::vector<int> discontinuity_edges(const ConformalSurface& s,
                                     const SweepFunction& f) {
  std::vector<int> out;
  for (int e = 0; e < s.ne(); ++e) {
    const Edge& ed = s.edges[e];
    if (ed.boundary()) continue;
    int i1 = f.domain_index(ed.s0.tri), i2 = f.domain_index(ed.s1.tri);
    if (i1 < 0 || i2 < 0) continue;
    double v1a = f.vals[i1][ed.s0.side];
    double v1b = f.vals[i1][(ed.s0.side + 1) % 3];
    double v2b = f.vals[i2][ed.s1.side];
    double v2a = f.vals[i2][(ed.s1.side + 1) % 3];
    if (std::abs(v1a - v2a) > 1e-9 || std::abs(v1b - v2b) > 1e-9)
      out.push_back(e);
  }
  return out;
}

// Row sweep on the unit flat torus: value = lattice row of each corner,
// counting the wrap seam as a jump.
SweepFunction row_sweep(const ConformalSurface& s, int n) {
  SweepFunction f;
  f.domain = Region::whole(s);
  f.vals.resize(s.nt());
  for (int t = 0; t < s.nt(); ++t) {
    int j = (t / 2) / n;
    if (t % 2 == 0)
      f.vals[t] = {double(j), double(j), double(j + 1)};
    else
      f.vals[t] = {double(j), double(j + 1), double(j + 1)};
  }
  f.jump_edges = discontinuity_edges(s, f);
  f.gamma_edges = f.jump_edges;
  return f;
}

SweepFunction vertex_value_sweep(const ConformalSurface& s,
                                 const std::vector<double>& vertex_vals) {
  SweepFunction f;
  f.domain = Region::whole(s);
  f.vals.resize(s.nt());
  for (int t = 0; t < s.nt(); ++t)
    for (int c = 0; c < 3; ++c) f.vals[t][c] = vertex_vals[s.tris[t].v[c]];
  return f;
}

// Every chord endpoint of a continuous-sweep level must meet exactly one
// partner on its edge.
void check_closed_level(const ConformalSurface& s, const Cycle1& z) {
  REQUIRE(z.intervals.empty());
  std::map<int, std::vector<double>> per_edge;
  for (const Chord& c : z.chords)
    for (const ChordEnd& end : {c.a, c.b}) {
      int e = s.tris[c.tri].edge[end.side];
      per_edge[e].push_back(s.edge_param_from_side(c.tri, end.side, end.u));
    }
  for (auto& [e, ps] : per_edge) {
    REQUIRE(ps.size() % 2 == 0);
    std::sort(ps.begin(), ps.end());
    for (size_t i = 0; i < ps.size(); i += 2) CHECK(ps[i + 1] - ps[i] <= 1e-9);
  }
}

void check_profile_sound(const ConformalSurface& s, const SweepFunction& f,
                         const WidthProfile& prof, int samples) {
  std::mt19937_64 rng(5150);
  std::uniform_real_distribution<double> U(0.15, 0.85);
  size_t n = prof.intervals.size();
  REQUIRE(n > 1);
  for (const auto& w : prof.intervals) {
    CHECK(w.free_mid <= w.free_bound + 1e-12);
    CHECK(w.gamma_mid <= w.gamma_bound + 1e-12);
    CHECK(w.bdry_mid <= w.bdry_bound + 1e-12);
  }
  for (int k = 0; k < samples; ++k) {
    const auto& w = prof.intervals[rng() % (n - 1)];
    if (w.t1 - w.t0 < 1e-12 * (1.0 + std::abs(w.t0))) continue;
    double tm = 0.5 * (w.t0 + w.t1);
    double mid_len = level_cycle(s, f, tm).orig_length(s);
    CHECK(mid_len ==
          doctest::Approx(w.free_mid + w.gamma_mid + w.bdry_mid).epsilon(1e-9));
    double t = w.t0 + (w.t1 - w.t0) * U(rng);
    double len = level_cycle(s, f, t).orig_length(s);
    CHECK(len <= w.free_bound + w.gamma_bound + w.bdry_bound + 1e-9);
  }
}

}  // namespace

TEST_CASE("row sweep on the flat torus has unit width plus seam") {
  int n = 8;
  ConformalSurface s = gen_flat_torus(n);
  SweepFunction f = row_sweep(s, n);
  CHECK(int(f.jump_edges.size()) == n);

  SweepCheck chk = verify_monotone(s, f);
  CHECK(chk.ok);
  CHECK(chk.worst_mismatch == 0.0);

  WidthProfile prof = width_profile(s, f);
  REQUIRE(prof.intervals.size() == size_t(n + 1));
  for (int j = 0; j < n; ++j) {
    const auto& w = prof.intervals[j];
    CHECK(w.free_mid == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(w.free_bound == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(w.gamma_mid == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(w.gamma_bound == doctest::Approx(1.0).epsilon(1e-12));
  }
  // after the last event the seam has matching values on both sides
  CHECK(prof.intervals[n].free_mid == 0.0);
  CHECK(prof.intervals[n].gamma_mid == 0.0);
  CHECK(prof.sup_free_bound() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(prof.sup_total_bound() == doctest::Approx(2.0).epsilon(1e-12));

  Cycle1 z = level_cycle(s, f, 3.5);
  CHECK(z.orig_length(s) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(int(z.intervals.size()) == n);

  // an undeclared seam is flagged
  SweepFunction bad = f;
  bad.jump_edges.clear();
  bad.gamma_edges.clear();
  CHECK_FALSE(verify_monotone(s, bad).ok);
}

TEST_CASE("latitude sweep measures the equator") {
  std::vector<Vec3> pos;
  ConformalSurface s = gen_sphere(3, &pos);
  std::vector<double> height(s.nv());
  for (int v = 0; v < s.nv(); ++v) height[v] = pos[v].z;
  SweepFunction f = vertex_value_sweep(s, height);
  CHECK(verify_monotone(s, f).ok);

  double equator = 2.0 * kPi * kSphereRadius;
  WidthProfile prof = width_profile(s, f);
  CHECK(prof.max_total_measured() >= 0.97 * equator);
  CHECK(prof.max_total_measured() <= 1.01 * equator);
  CHECK(prof.sup_total_bound() >= prof.max_total_measured());
  CHECK(prof.sup_total_bound() <= 1.35 * equator);
  CHECK(prof.max_free_measured() == prof.max_total_measured());

  check_profile_sound(s, f, prof, 12);

  // a generic level is a closed polygon
  Cycle1 z = level_cycle(s, f, 0.01 * kSphereRadius + 1.2345e-7);
  check_closed_level(s, z);

  // constant conformal factor sqrt(4 pi) turns it into the round unit sphere
  std::vector<TriSpec> specs(s.nt());
  for (int t = 0; t < s.nt(); ++t) {
    specs[t].v = s.tris[t].v;
    specs[t].len = s.tris[t].len;
  }
  std::vector<GluingSpec> glue;
  for (int e = 0; e < s.ne(); ++e)
    glue.push_back({s.edges[e].s0.tri, s.edges[e].s0.side, s.edges[e].s1.tri,
                    s.edges[e].s1.side});
  ConformalSurface round = build_surface(
      Model::Spherical, std::vector<double>(s.nv(), 2.0 * std::sqrt(kPi)),
      std::move(specs), glue);
  WidthProfile prof2 = width_profile(round, f);
  CHECK(prof2.max_total_measured() >= 0.97 * 2.0 * kPi);
  CHECK(prof2.max_total_measured() <= 1.01 * 2.0 * kPi);
}

TEST_CASE("distance sweeps have sound certified widths") {
  SUBCASE("bumpy torus") {
    ConformalSurface s = gen_bumpy_torus(8, 0.25, 7);
    DistanceField df = distance_field(s, {0}, 3);
    SweepFunction f = vertex_value_sweep(s, df.vertex_dist);
    CHECK(verify_monotone(s, f).ok);
    WidthProfile prof = width_profile(s, f);
    CHECK(prof.max_total_measured() > 0.5);
    check_profile_sound(s, f, prof, 20);

    // pick a comfortably wide interval near the middle for the level check
    size_t mid_iv = prof.intervals.size() / 2;
    while (mid_iv + 2 < prof.intervals.size() &&
           prof.intervals[mid_iv].t1 - prof.intervals[mid_iv].t0 < 1e-6)
      ++mid_iv;
    double tm =
        0.5 * (prof.intervals[mid_iv].t0 + prof.intervals[mid_iv].t1);
    check_closed_level(s, level_cycle(s, f, tm));
  }
  SUBCASE("hyperbolic genus two") {
    ConformalSurface s = gen_bolza(2);
    DistanceField df = distance_field(s, {0}, 3);
    SweepFunction f = vertex_value_sweep(s, df.vertex_dist);
    CHECK(verify_monotone(s, f).ok);
    WidthProfile prof = width_profile(s, f);
    CHECK(prof.max_total_measured() > 1.0);
    check_profile_sound(s, f, prof, 20);
  }
}

TEST_CASE("normalize_sweep maps onto the unit band") {
  ConformalSurface s = gen_flat_torus(4);
  SweepFunction f = row_sweep(s, 4);
  SweepFunction g = normalize_sweep(f);
  CHECK(g.min_value() == 0.0);
  CHECK(g.max_value() == 1.0);

  SweepFunction c = f;
  for (auto& v : c.vals) v = {2.0, 2.0, 2.0};
  SweepFunction cn = normalize_sweep(c);
  CHECK(cn.min_value() == 0.5);
  CHECK(cn.max_value() == 0.5);
}

TEST_CASE("concatenation keeps the free width and budgets the seams") {
  int n = 8;
  ConformalSurface s = gen_flat_torus(n);

  auto band = [&](int j0, int j1) {
    SweepFunction f;
    for (int t = 0; t < s.nt(); ++t) {
      int j = (t / 2) / n;
      if (j >= j0 && j < j1) f.domain.tris.push_back(t);
    }
    f.domain.normalize();
    f.vals.resize(f.domain.tris.size());
    for (size_t k = 0; k < f.domain.tris.size(); ++k) {
      int t = f.domain.tris[k];
      int j = (t / 2) / n;
      if (t % 2 == 0)
        f.vals[k] = {double(j), double(j), double(j + 1)};
      else
        f.vals[k] = {double(j), double(j + 1), double(j + 1)};
    }
    return f;
  };

  SweepFunction f1 = band(0, n / 2), f2 = band(n / 2, n);
  std::vector<int> gamma = frontier_edges(s, f1.domain, f2.domain);
  CHECK(int(gamma.size()) == 2 * n);

  SweepFunction out = concat_sweepouts(s, f1, f2, gamma);
  CHECK(verify_monotone(s, out).ok);
  CHECK(out.domain.tris.size() == size_t(s.nt()));

  WidthProfile prof = width_profile(s, out);
  CHECK(prof.sup_free_bound() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(prof.sup_total_bound() == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(prof.max_total_measured() == doctest::Approx(2.0).epsilon(1e-12));

  // free width never exceeds the worst stage
  WidthProfile p1 = width_profile(s, f1);
  WidthProfile p2 = width_profile(s, f2);
  CHECK(prof.sup_free_bound() <=
        std::max(p1.sup_free_bound(), p2.sup_free_bound()) + 1e-12);

  // a wrong seam is rejected
  std::vector<int> bad = gamma;
  bad.pop_back();
  CHECK_THROWS(concat_sweepouts(s, f1, f2, bad));

  // three-way split through concat_many
  std::vector<SweepFunction> stages = {band(0, 2), band(2, 5), band(5, n)};
  SweepFunction out3 = concat_many(s, stages);
  CHECK(verify_monotone(s, out3).ok);
  WidthProfile pr3 = width_profile(s, out3);
  CHECK(pr3.sup_free_bound() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(pr3.sup_total_bound() == doctest::Approx(2.0).epsilon(1e-12));

  // overlapping stages are rejected
  CHECK_THROWS(concat_many(s, {band(0, 5), band(4, n)}));
}
