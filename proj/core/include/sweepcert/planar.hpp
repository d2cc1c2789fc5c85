#pragma once

#include <array>
#include <vector>

#include "sweepcert/surface.hpp"
#include "sweepcert/sweep.hpp"

namespace sweepcert {

// Bounded open polygonal subset of the plane. Rings are closed polylines
// (first vertex not repeated) under the even-odd rule: outer boundaries
// counter-clockwise, holes clockwise.
struct PlanarRegion {
  std::vector<std::vector<std::array<double, 2>>> rings;

  double area() const; // signed ring sum; positive for valid regions
  std::array<double, 4> bbox() const;
  bool is_rectilinear(double tol = 1e-9) const;
  bool contains(double x, double y) const; // even-odd, for generic points
};

// Length of the open region's intersection with the line {coord[axis] = c}.
// Exact for boundary-aligned lines: segments lying on the line count zero.
double line_measure(const PlanarRegion& p, int axis, double c, double tol);

// Combined length of the intersection with both grid-line families at the
// given offset.
double grid_intersection_length(const PlanarRegion& p, double cell, double ox,
                                double oy);

struct GridOffset {
  double ox = 0, oy = 0;
  double skel_len = 0; // grid one-skeleton ∩ P at the returned offset
};

// Exact minimization over offsets. The two line families are independent and
// each family's intersection length is piecewise linear in its offset with
// breakpoints at vertex coordinates mod cell; boundary-aligned offsets can
// only lower the value, so the breakpoint scan finds the global minimum.
// The result never exceeds the averaging bound 2*area/cell.
GridOffset grid_offset_search(const PlanarRegion& p, double cell);

// Grid sweepout of a rectilinear region: grid cells are drained one by one in
// boustrophedon row order by a sliding vertical segment. Gamma is the grid
// skeleton inside P; the region's own boundary stays relative.
struct GuthSweep {
  ConformalSurface surf; // flat triangulation of the closed region
  SweepFunction f;
  GridOffset offset;
  double cell = 0;
  double skel_len = 0;    // interior grid edges present in the mesh
  double width_free = 0;  // certified sup of the sliding segment
  double width_total = 0; // certified sup of segment + lit skeleton
};

GuthSweep guth_sweep(const PlanarRegion& p);              // cell = sqrt(area)
GuthSweep guth_sweep(const PlanarRegion& p, double cell); // explicit pitch

// Boundary of a set of unit lattice cells, scaled and translated. Holes come
// out clockwise; rings touching at lattice points are kept simple by taking
// the leftmost turn.
PlanarRegion polyomino_region(const std::vector<std::array<int, 2>>& cells,
                              double scale = 1.0, double tx = 0.0,
                              double ty = 0.0);

} // namespace sweepcert
