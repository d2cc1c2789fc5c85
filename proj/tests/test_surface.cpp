#include "doctest.h"
#include "sweepcert/generators.hpp"
#include "sweepcert/json_io.hpp"
#include "sweepcert/surface.hpp"

#include <cmath>
#include <map>

using namespace sweepcert;

namespace {

// Unit square torus out of two triangles, every vertex identified.
ConformalSurface two_tri_torus() {
  double d = std::sqrt(2.0);
  std::vector<TriSpec> specs = {
      {{0, 0, 0}, {1, 1, d}},
      {{0, 0, 0}, {d, 1, 1}},
  };
  std::vector<GluingSpec> glue = {{0, 2, 1, 0}, {0, 0, 1, 1}, {0, 1, 1, 2}};
  return build_surface(Model::Flat, {1.0}, specs, glue);
}

} // namespace

TEST_CASE("two-triangle torus builds and measures correctly") {
  ConformalSurface s = two_tri_torus();
  CHECK(s.genus == 1);
  CHECK(s.closed);
  CHECK(s.nv() == 1);
  CHECK(s.ne() == 3);
  CHECK(s.nt() == 2);
  CHECK(s.total_model_area == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(s.total_orig_area == doctest::Approx(1.0).epsilon(1e-14));

  for (int t = 0; t < 2; ++t)
    for (int sd = 0; sd < 3; ++sd) {
      SideRef m = s.mate(t, sd);
      SideRef back = s.mate(m.tri, m.side);
      CHECK(back.tri == t);
      CHECK(back.side == sd);
    }
  auto sums = s.vertex_angle_sums();
  CHECK(sums[0] == doctest::Approx(2 * kPi).epsilon(1e-12));
}

TEST_CASE("builder rejects malformed input") {
  double d = std::sqrt(2.0);
  std::vector<TriSpec> specs = {{{0, 0, 0}, {1, 1, d}}, {{0, 0, 0}, {d, 1, 1}}};

  SUBCASE("open surface") {
    std::vector<GluingSpec> glue = {{0, 2, 1, 0}};
    CHECK_THROWS(build_surface(Model::Flat, {1.0}, specs, glue));
  }
  SUBCASE("double gluing") {
    std::vector<GluingSpec> glue = {{0, 2, 1, 0}, {0, 2, 1, 1}, {0, 0, 1, 1}, {0, 1, 1, 2}};
    CHECK_THROWS(build_surface(Model::Flat, {1.0}, specs, glue));
  }
  SUBCASE("length mismatch") {
    std::vector<TriSpec> bad = specs;
    bad[1].len = {d, 1, 1.5};
    std::vector<GluingSpec> glue = {{0, 2, 1, 0}, {0, 0, 1, 1}, {0, 1, 1, 2}};
    CHECK_THROWS(build_surface(Model::Flat, {1.0}, bad, glue));
  }
  SUBCASE("self gluing of one side") {
    std::vector<GluingSpec> glue = {{0, 2, 0, 2}};
    CHECK_THROWS(build_surface(Model::Flat, {1.0}, specs, glue));
  }
  SUBCASE("nonpositive lambda") {
    std::vector<GluingSpec> glue = {{0, 2, 1, 0}, {0, 0, 1, 1}, {0, 1, 1, 2}};
    CHECK_THROWS(build_surface(Model::Flat, {0.0}, specs, glue));
  }
  SUBCASE("cone points rejected") {
    // Flat octahedron: every vertex collects 240 degrees.
    std::vector<std::array<int, 3>> faces = {{0, 1, 2}, {0, 2, 3}, {0, 3, 4}, {0, 4, 1},
                                             {5, 2, 1}, {5, 3, 2}, {5, 4, 3}, {5, 1, 4}};
    std::vector<TriSpec> oct(8);
    for (int t = 0; t < 8; ++t) oct[t] = {faces[t], {1, 1, 1}};
    std::map<std::pair<int, int>, SideRef> open;
    std::vector<GluingSpec> glue;
    for (int t = 0; t < 8; ++t)
      for (int sd = 0; sd < 3; ++sd) {
        auto key = std::minmax(faces[t][sd], faces[t][(sd + 1) % 3]);
        auto it = open.find(key);
        if (it == open.end())
          open.emplace(key, SideRef{t, sd});
        else
          glue.push_back({it->second.tri, it->second.side, t, sd});
      }
    std::string msg;
    try {
      build_surface(Model::Flat, {1, 1, 1, 1, 1, 1}, oct, glue);
    } catch (const std::exception& e) {
      msg = e.what();
    }
    CHECK(msg.find("angle sum") != std::string::npos);
  }
}

TEST_CASE("vertex anti-parallel convention is enforced") {
  // Same torus but one gluing listed with the wrong orientation: use
  // distinct vertex ids so the mistake is observable.
  std::vector<TriSpec> specs = {
      {{0, 1, 2}, {1, 1, std::sqrt(2.0)}},
      {{0, 2, 3}, {std::sqrt(2.0), 1, 1}},
  };
  std::vector<GluingSpec> glue = {{0, 2, 1, 0}, {0, 0, 1, 1}, {0, 1, 1, 2}};
  // This "plane square" is open at the outer sides after the diagonal glue;
  // ids on sides (0,0): 0->1 vs (1,1): 2->3 cannot glue.
  CHECK_THROWS(build_surface(Model::Flat, {1, 1, 1, 1}, specs, glue));
}

TEST_CASE("region operations on a grid torus") {
  ConformalSurface s = gen_flat_torus(4);
  Region all = Region::whole(s);
  CHECK(all.size() == 32);
  CHECK(all.model_area(s) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(all.boundary_edges(s).empty());
  CHECK(all.interior_edges(s).size() == (size_t)s.ne());

  Region one;
  one.tris = {5};
  CHECK(one.boundary_edges(s).size() == 3);
  CHECK(one.interior_edges(s).empty());
  CHECK(one.model_area(s) == doctest::Approx(1.0 / 32).epsilon(1e-13));

  Region pair;
  pair.tris = {4, 5};
  auto comps = pair.components(s);
  CHECK(comps.size() == 1);

  Region rest = all.set_minus(one);
  CHECK(rest.size() == 31);
  CHECK(rest.set_union(one).size() == 32);
  CHECK(rest.set_intersect(one).empty());
  auto rest_comps = rest.components(s);
  CHECK(rest_comps.size() == 1);
}

TEST_CASE("surface json round trip") {
  for (int which = 0; which < 2; ++which) {
    ConformalSurface s = (which == 0) ? gen_flat_torus(3) : gen_bolza(1);
    auto j = surface_to_json(s);
    ConformalSurface r = surface_from_json(j);
    CHECK(r.genus == s.genus);
    CHECK(r.nv() == s.nv());
    CHECK(r.ne() == s.ne());
    CHECK(r.nt() == s.nt());
    CHECK(r.total_model_area == doctest::Approx(s.total_model_area).epsilon(1e-14));
    for (int t = 0; t < s.nt(); ++t)
      for (int c = 0; c < 3; ++c) CHECK(r.tris[t].len[c] == s.tris[t].len[c]);
  }
}

TEST_CASE("surface json rejects bad files") {
  auto j = surface_to_json(gen_flat_torus(2));
  SUBCASE("bad genus") {
    j["genus"] = 3;
    CHECK_THROWS(surface_from_json(j));
  }
  SUBCASE("missing field") {
    j.erase("triangles");
    CHECK_THROWS(surface_from_json(j));
  }
  SUBCASE("bad model") {
    j["model"] = "torus";
    CHECK_THROWS(surface_from_json(j));
  }
  SUBCASE("duplicate vertex id") {
    j["vertices"][1]["id"] = 0;
    CHECK_THROWS(surface_from_json(j));
  }
}
