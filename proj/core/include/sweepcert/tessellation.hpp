#pragma once

#include <vector>

#include "sweepcert/surface.hpp"

namespace sweepcert {

enum class TileKind { whole_surface, triangle, quadrilateral };

// Right-angled collar quadrilateral, computed from the core length and half
// width of the descriptor alone. `a` lies on the core curve, `b` and `d` are
// the meridian sides (at the trigon corner and at the arc apex), `c` is the
// half-arc, `phi` the single non-right angle. ideal_area = pi/2 - phi.
struct QuadMeta {
  double a = 0, b = 0, c = 0, d = 0;
  double phi = 0;
  double ideal_area = 0;
};

struct Tile {
  Region region;
  TileKind kind = TileKind::triangle;
  QuadMeta quad;  // meaningful for quadrilateral tiles only
};

// Closed curve of model length <= log 2 together with its collar half width
// w = asinh(1 / sinh(len / 2)). The walk lists mesh vertices in order;
// consecutive entries (cyclically) must span a mesh edge, and the walk's
// measured model length must agree with model_length.
struct CollarDescriptor {
  std::vector<int> walk;
  double model_length = 0;
  double half_width = 0;
};

struct TessStats {
  int count = 0;
  int neighbor_max = 0;
  double tri_area_min = 0, tri_area_max = 0;    // model metric
  double quad_area_min = 0, quad_area_max = 0;  // model metric
  bool pass = false;
  std::vector<int> offenders;  // tile indices violating a measured band
  std::string note;
};

struct Tessellation {
  std::vector<Tile> tiles;
  bool certified = false;
  TessStats stats;
};

// Quadrilateral data for a collar of the given core length and half width,
// by right-angled hyperbolic trigonometry.
QuadMeta collar_quad_meta(double core_length, double half_width);

// Partition of the surface into tiles. Genus <= 1 keeps the whole surface as
// a single tile. Genus >= 2 carves eight quadrilateral tiles out of every
// supplied collar (the band within b of the core, split by side and by
// quarter position along the core) and covers the rest with nearest-center
// cells of a greedy maximal log(2)-separated vertex net. A non-empty
// tile_hint partition overrides the net and is adopted as triangle-kind
// tiles. The result is uncertified until certify_tessellation passes.
Tessellation build_tessellation(const ConformalSurface& s,
                                const std::vector<CollarDescriptor>& collars = {},
                                const std::vector<Region>& tile_hint = {});

// Measures the tessellation and stamps `certified`: the tiles must partition
// the surface, triangle-kind model areas must lie in [0.19, 0.55] and
// quadrilateral areas in [0.26, 0.34], the half-neighborhood of any tile may
// meet at most 40 tiles, and the count is capped at max(67 * (g - 1), 1).
// A single whole-surface tile skips the area bands.
TessStats certify_tessellation(const ConformalSurface& s, Tessellation& t);

struct AnnulusCover {
  std::vector<int> centers;  // mesh vertex ids
  bool certified = false;
  double max_gap = 0;   // largest sampled annulus distance to its center
  int sample_count = 0;
};

// Balls of radius r covering the annulus B(x, 3r/2) \ B(x, r) inside the
// union of `tiles`. Centers are seeded on the ring at distance 5r/4 from x
// (5 of them in the flat and spherical models, 21 in the hyperbolic model
// for r <= 2, two rings of 21 beyond), snapped to mesh vertices through a
// chart, and greedy mop-up adds vertices until the sampled coverage closes.
// Certified when coverage holds with at most 42 centers.
AnnulusCover annulus_ball_cover(const ConformalSurface& s,
                                const std::vector<Region>& tiles, int x,
                                double r);

} // namespace sweepcert
