#include "doctest.h"
#include "sweepcert/distance.hpp"
#include "sweepcert/generators.hpp"
#include "sweepcert/refine.hpp"

#include <cmath>

using namespace sweepcert;

namespace {

double torus_exact_dist(int n, int i, int j) {
  double best = kInf;
  for (int p = -1; p <= 1; ++p)
    for (int q = -1; q <= 1; ++q) {
      double dx = double(i) / n + p, dy = double(j) / n + q;
      best = std::min(best, std::hypot(dx, dy));
    }
  return best;
}

} // namespace

TEST_CASE("torus distances: exact along lattice lines, tight elsewhere") {
  int n = 8;
  ConformalSurface s = gen_flat_torus(n);
  SteinerGraph g(s, 4);
  auto res = g.run({{g.vertex_node(0), 0.0}});
  auto d = g.vertex_distances(res);

  for (int k = 1; k < n; ++k) {
    CHECK(d[k] == doctest::Approx(torus_exact_dist(n, k, 0)).epsilon(1e-12));
    CHECK(d[k * n] == doctest::Approx(torus_exact_dist(n, 0, k)).epsilon(1e-12));
    CHECK(d[k * n + k] == doctest::Approx(torus_exact_dist(n, k, k)).epsilon(1e-12));
  }
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      double exact = torus_exact_dist(n, i, j);
      double got = d[j * n + i];
      CHECK(got >= exact - 1e-12);
      CHECK(got <= exact * 1.09 + 1e-12);
    }
}

TEST_CASE("octagon spokes are shortest paths") {
  for (int r = 0; r < 3; ++r) {
    ConformalSurface s = gen_bolza(r);
    SteinerGraph g(s, 2);
    auto res = g.run({{g.vertex_node(0), 0.0}});
    double spoke = std::acosh(3.0 + 2.0 * std::sqrt(2.0));
    CHECK(res.dist[1] == doctest::Approx(spoke).epsilon(1e-11));
  }
}

TEST_CASE("sphere antipodal distance") {
  ConformalSurface s = gen_sphere(2);
  SteinerGraph g(s, 4);
  auto res = g.run({{g.vertex_node(0), 0.0}});
  double exact = kPi * kSphereRadius;
  CHECK(res.dist[3] >= exact - 1e-12);
  CHECK(res.dist[3] <= exact * 1.05);
}

TEST_CASE("multi-source distance equals row distance on the torus") {
  int n = 8;
  ConformalSurface s = gen_flat_torus(n);
  SteinerGraph g(s, 3);
  std::vector<std::pair<int, double>> src;
  for (int i = 0; i < n; ++i) src.push_back({g.vertex_node(i), 0.0});
  auto res = g.run(src);
  for (int j = 0; j < n; ++j) {
    double exact = std::min(double(j) / n, double(n - j) / n);
    CHECK(res.dist[j * n + 2] == doctest::Approx(exact).epsilon(1e-12));
  }
}

TEST_CASE("distance_field reports a small discretization gap") {
  ConformalSurface s = gen_flat_torus(8);
  DistanceField f = distance_field(s, {0}, 4);
  CHECK(f.vertex_dist.size() == (size_t)s.nv());
  CHECK(f.eps_disc >= 0);
  CHECK(f.eps_disc < 0.02);
  CHECK(f.vertex_dist[4] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("region mask restricts the search") {
  int n = 8;
  ConformalSurface s = gen_flat_torus(n);
  // Only the j < 4 strip is usable; vertices far inside the blocked strip
  // stay unreachable.
  Region strip;
  for (int t = 0; t < s.nt(); ++t)
    if ((t / 2) / n < 4) strip.tris.push_back(t);
  strip.normalize();
  DistanceField f = distance_field(s, {0}, 3, &strip);
  CHECK(std::isfinite(f.vertex_dist[2 * n + 3]));
  CHECK(!std::isfinite(f.vertex_dist[6 * n + 3]));
}

TEST_CASE("capture stop fires near the right radius") {
  ConformalSurface s = gen_flat_torus(16);
  SteinerGraph g(s, 3);
  SteinerGraph::Options opt;
  opt.stop_capture_orig_area = 0.25;
  auto res = g.run({{g.vertex_node(0), 0.0}}, opt);
  CHECK(res.stopped_early);
  CHECK(res.reached_orig_area >= 0.25);
  CHECK(res.reached_orig_area < 0.30);
  double r_disk = std::sqrt(0.25 / kPi);
  CHECK(res.last_popped_dist > 0.8 * r_disk);
  CHECK(res.last_popped_dist < 1.4 * r_disk);
}

TEST_CASE("stop_dist truncates expansion") {
  ConformalSurface s = gen_flat_torus(12);
  SteinerGraph g(s, 2);
  SteinerGraph::Options opt;
  opt.stop_dist = 0.2;
  auto res = g.run({{g.vertex_node(0), 0.0}}, opt);
  CHECK(res.stopped_early);
  int finite = 0;
  for (int v = 0; v < s.nv(); ++v)
    if (std::isfinite(res.dist[v])) {
      ++finite;
      CHECK(res.dist[v] <= 0.2 + 0.13);
    }
  CHECK(finite > 10);
  CHECK(finite < s.nv());
}

TEST_CASE("orig metric weights respond to the conformal factor") {
  ConformalSurface flat = gen_flat_torus(8);
  ConformalSurface bump = gen_bumpy_torus(8, 0.25, 99);
  SteinerGraph gf(flat, 3), gb(bump, 3);
  SteinerGraph::Options orig;
  orig.orig_metric = true;
  auto rf = gf.run({{0, 0.0}}, orig);
  auto rb = gb.run({{0, 0.0}}, orig);
  CHECK(rf.dist[4] == doctest::Approx(0.5).epsilon(1e-12));
  bool differs = false;
  for (int v = 1; v < flat.nv(); ++v)
    if (std::abs(rf.dist[v] - rb.dist[v]) > 1e-6) differs = true;
  CHECK(differs);

  // Scaling lambda by c scales orig distances by c.
  ConformalSurface bump2 = bump;
  // rebuild with doubled lambda via the builder to keep caches consistent
  std::vector<TriSpec> specs(bump.nt());
  for (int t = 0; t < bump.nt(); ++t) specs[t] = {bump.tris[t].v, bump.tris[t].len};
  std::vector<GluingSpec> glue;
  for (const Edge& e : bump.edges)
    if (!e.boundary())
      glue.push_back({e.s0.tri, e.s0.side, e.s1.tri, e.s1.side});
  std::vector<double> lam2 = bump.lambda;
  for (double& l : lam2) l *= 2.0;
  ConformalSurface scaled = build_surface(bump.model, lam2, specs, glue);
  SteinerGraph gs(scaled, 3);
  auto rs = gs.run({{0, 0.0}}, orig);
  for (int v = 0; v < bump.nv(); ++v)
    CHECK(rs.dist[v] == doctest::Approx(2.0 * rb.dist[v]).epsilon(1e-9));
}

TEST_CASE("sublevel_region collects triangles by corner distance") {
  ConformalSurface s = gen_flat_torus(8);
  DistanceField f = distance_field(s, {0}, 3);
  Region ball = sublevel_region(s, f.vertex_dist, 0.3);
  CHECK(!ball.empty());
  CHECK(ball.size() < s.nt());
  double area = ball.orig_area(s);
  CHECK(area > kPi * 0.09 * 0.7);
  CHECK(area < kPi * 0.09 * 2.5);
}
