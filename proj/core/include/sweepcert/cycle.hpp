#pragma once

#include <vector>

#include "sweepcert/surface.hpp"

namespace sweepcert {

// ── mod-2 one-cycles ────────────────────────────────────────────────────────
//
// A cycle is stored as a union of geodesic pieces of two kinds:
//   * chords:    a geodesic segment inside one triangle, with both endpoints
//                on triangle sides, given as (side, side-parameter);
//   * intervals: a sub-arc of a mesh edge, in canonical edge parameters.
// Addition is mod 2: coinciding pieces cancel.

struct ChordEnd {
  int side;   // local side of the carrying triangle
  double u;   // parameter in [0,1] along that side, from corner `side`
};

struct Chord {
  int tri;
  ChordEnd a, b;
};

struct EdgeInterval {
  int edge;
  double p0, p1;  // canonical edge parameters, p0 <= p1
};

class Cycle1 {
 public:
  std::vector<Chord> chords;
  std::vector<EdgeInterval> intervals;

  bool empty() const { return chords.empty() && intervals.empty(); }

  // Reduce to canonical form: per-edge symmetric difference of intervals,
  // cancellation of coinciding chords (including partial overlaps of
  // collinear chords inside one triangle), stable ordering.
  void canonicalize(const ConformalSurface& s);

  // Mod-2 sum; the result is canonical.
  Cycle1 plus(const Cycle1& other, const ConformalSurface& s) const;

  double model_length(const ConformalSurface& s) const;
  double orig_length(const ConformalSurface& s) const;

  // Decide equality of canonical forms up to endpoint tolerance.
  bool same_as(const Cycle1& other, double tol = 1e-9) const;

  // Ambient endpoints of a chord in the carrying triangle's placement.
  static Vec3 chord_point(const ConformalSurface& s, int tri, const ChordEnd& e);
};

// Cycle consisting of whole mesh edges.
Cycle1 cycle_from_edges(const std::vector<int>& edge_ids);

// Total length of a set of whole edges in the lambda^2 metric.
double edges_orig_length(const ConformalSurface& s, const std::vector<int>& edge_ids);

}  // namespace sweepcert
