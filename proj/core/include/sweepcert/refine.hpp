#pragma once

#include <vector>

#include "sweepcert/surface.hpp"
#include "sweepcert/sweep.hpp"

namespace sweepcert {

// How old entities map to new ones after a refinement. Old vertex ids are
// preserved as a prefix of the new vertex range.
struct RefineMap {
  std::vector<std::vector<int>> tri_children; // old tri -> new tris
  std::vector<int> tri_parent;                // new tri -> old tri
  std::vector<std::vector<int>> edge_pieces;  // old edge -> new edges, ordered along s0
  int old_vertex_count = 0;

  Region map_region(const Region& r) const;
};

struct Refined {
  ConformalSurface surf;
  RefineMap map;
};

// Uniform midpoint subdivision of every triangle into four.
Refined subdivide4(const ConformalSurface& s);

// Result of splitting a surface along one level set of a monotone sweep.
// The level becomes a chain of mesh edges; the sweep domain falls apart into
// the strict sublevel and the rest.
struct LevelCut {
  ConformalSurface surf;
  RefineMap map;
  std::vector<int> cut_edges; // new edges along the level, sorted
  Region below, above;        // sweep domain split by the level

  Region map_region(const Region& r) const { return map.map_region(r); }
};

// Cut the surface along {f = t}. The level must avoid every corner value of
// the sweep domain and must not pass through a vertex; pick a generic level.
// Triangles outside the domain that lose a full side are re-triangulated so
// the mesh stays conforming. New vertices take the arclength-interpolated
// conformal factor of their edge, which keeps every split edge's scaled
// length exactly additive.
LevelCut insert_level_cut(const ConformalSurface& s, const SweepFunction& f, double t);

} // namespace sweepcert
