#pragma once

#include <array>
#include <vector>

#include "sweepcert/surface.hpp"

namespace sweepcert {

// Planar unfolding of a small region around a center vertex: triangles are
// developed into a common model frame and projected through the azimuthal
// map at the center, scaled by the center's conformal factor. The length
// distortion against the original metric is sampled on mesh edges and
// in-triangle chords, never assumed. Disconnected components are developed
// around their own base points and packed along the x axis with gaps.
struct Chart {
  Region region;
  int center = -1;
  double scale = 1;   // conformal factor folded into the plane coordinates
  double lip = 1;     // max sampled length distortion, both directions
  double radius = 0;  // max planar distance from the center image
  std::vector<int> verts;                  // sorted vertex ids with positions
  std::vector<std::array<double, 2>> pos;  // parallel to verts

  const std::array<double, 2>& vertex_pos(int v) const;
};

Chart chart_around(const ConformalSurface& s, const Region& region, int center);

struct ChartCover {
  std::vector<Chart> charts;
  double delta = 0;  // validated chart scale, halved until certified
  int retries = 0;
  double cover_radius = 0;  // max vertex distance to its nearest center
};

// Charts at the centers of a delta/2-net of u, each covering the delta-ball
// around its center. delta is halved until every chart certifies
// lip <= max_lip or the retry budget runs out.
ChartCover chart_extract(const ConformalSurface& s, const Region& u,
                         double delta, double max_lip = 1.01,
                         int max_retries = 6);

} // namespace sweepcert
