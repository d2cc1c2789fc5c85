#include "doctest.h"
#include "sweepcert/generators.hpp"
#include "sweepcert/refine.hpp"

#include <cmath>

using namespace sweepcert;

TEST_CASE("flat torus grids") {
  for (int n : {2, 4, 7}) {
    ConformalSurface s = gen_flat_torus(n);
    CHECK(s.genus == 1);
    CHECK(s.nv() == n * n);
    CHECK(s.nt() == 2 * n * n);
    CHECK(s.ne() == 3 * n * n);
    CHECK(s.total_model_area == doctest::Approx(1.0).epsilon(5e-13));
    CHECK(s.total_orig_area == doctest::Approx(1.0).epsilon(5e-13));
  }
}

TEST_CASE("bumpy torus stays positive and integrates its bump field") {
  ConformalSurface s = gen_bumpy_torus(16, 0.25, 1234);
  CHECK(s.genus == 1);
  double lmin = 1e9, lmax = -1e9;
  for (double l : s.lambda) {
    lmin = std::min(lmin, l);
    lmax = std::max(lmax, l);
  }
  CHECK(lmin > 0.5);
  CHECK(lmax < 1.5);
  CHECK(lmax > 1.01);
  CHECK(s.total_model_area == doctest::Approx(1.0).epsilon(5e-13));

  // Independent oracle for one triangle: dense barycentric quadrature of
  // the interpolated lambda squared.
  int t = 37;
  const Tri& tr = s.tris[t];
  double l0 = s.lambda[tr.v[0]], l1 = s.lambda[tr.v[1]], l2 = s.lambda[tr.v[2]];
  int n = 500;
  double acc = 0;
  int cnt = 0;
  auto sample = [&](double a, double b) {
    double lam = a * l0 + b * l1 + (1 - a - b) * l2;
    acc += lam * lam;
    ++cnt;
  };
  for (int i = 0; i < n; ++i)
    for (int j = 0; i + j < n; ++j) {
      sample((i + 1.0 / 3) / n, (j + 1.0 / 3) / n);
      if (i + j < n - 1) sample((i + 2.0 / 3) / n, (j + 2.0 / 3) / n);
    }
  double oracle = s.tri_model_area[t] * acc / cnt;
  CHECK(s.tri_orig_area[t] == doctest::Approx(oracle).epsilon(1e-6));
}

TEST_CASE("icosahedral spheres") {
  ConformalSurface s0 = gen_sphere(0);
  CHECK(s0.genus == 0);
  CHECK(s0.nv() == 12);
  CHECK(s0.ne() == 30);
  CHECK(s0.nt() == 20);
  CHECK(s0.total_model_area == doctest::Approx(1.0).epsilon(1e-12));

  ConformalSurface s3 = gen_sphere(3);
  CHECK(s3.genus == 0);
  CHECK(s3.nt() == 1280);
  CHECK(s3.total_model_area == doctest::Approx(1.0).epsilon(1e-11));
}

TEST_CASE("octagon surface of genus two") {
  ConformalSurface s = gen_bolza(0);
  CHECK(s.genus == 2);
  CHECK(s.nv() == 2);
  CHECK(s.ne() == 12);
  CHECK(s.nt() == 8);
  CHECK(s.total_model_area == doctest::Approx(4 * kPi).epsilon(1e-12));

  double spoke = s.tris[0].len[0];
  double side = s.tris[0].len[1];
  CHECK(std::cosh(spoke) == doctest::Approx(3 + 2 * std::sqrt(2.0)).epsilon(1e-12));
  CHECK(std::cosh(side / 2) == doctest::Approx(1 + std::sqrt(2.0)).epsilon(1e-12));

  auto sums = s.vertex_angle_sums();
  CHECK(sums[0] == doctest::Approx(2 * kPi).epsilon(1e-12));
  CHECK(sums[1] == doctest::Approx(2 * kPi).epsilon(1e-12));

  ConformalSurface s2 = gen_bolza(2);
  CHECK(s2.genus == 2);
  CHECK(s2.nt() == 128);
  CHECK(s2.total_model_area == doctest::Approx(4 * kPi).epsilon(1e-9));
}

TEST_CASE("refinement preserves topology and measure") {
  SUBCASE("flat torus with bumps") {
    ConformalSurface s = gen_bumpy_torus(6, 0.2, 77);
    Refined r = subdivide4(s);
    CHECK(r.surf.genus == 1);
    CHECK(r.surf.nv() == s.nv() + s.ne());
    CHECK(r.surf.ne() == 2 * s.ne() + 3 * s.nt());
    CHECK(r.surf.nt() == 4 * s.nt());
    CHECK(r.surf.total_model_area == doctest::Approx(s.total_model_area).epsilon(1e-13));
    // Affine conformal factor on a flat mesh restricts exactly.
    CHECK(r.surf.total_orig_area == doctest::Approx(s.total_orig_area).epsilon(1e-12));
  }
  SUBCASE("curved models") {
    for (int which = 0; which < 2; ++which) {
      ConformalSurface s = (which == 0) ? gen_sphere(1) : gen_bolza(0);
      Refined r = subdivide4(s);
      CHECK(r.surf.genus == s.genus);
      CHECK(r.surf.total_model_area ==
            doctest::Approx(s.total_model_area).epsilon(1e-12));
    }
  }
}

TEST_CASE("refinement maps regions and edges consistently") {
  ConformalSurface s = gen_flat_torus(3);
  Refined r = subdivide4(s);
  Region reg;
  reg.tris = {0, 5};
  Region mapped = r.map.map_region(reg);
  CHECK(mapped.size() == 8);
  CHECK(mapped.model_area(r.surf) == doctest::Approx(reg.model_area(s)).epsilon(1e-13));

  for (int e = 0; e < s.ne(); ++e) {
    const auto& pieces = r.map.edge_pieces[e];
    REQUIRE(pieces.size() == 2);
    double len = r.surf.edges[pieces[0]].model_len + r.surf.edges[pieces[1]].model_len;
    CHECK(len == doctest::Approx(s.edges[e].model_len).epsilon(1e-13));
  }
  for (int t = 0; t < r.surf.nt(); ++t)
    CHECK(r.map.tri_children[r.map.tri_parent[t]].size() == 4);
}
