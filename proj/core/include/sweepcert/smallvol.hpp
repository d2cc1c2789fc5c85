#pragma once

#include <vector>

#include "sweepcert/chart.hpp"
#include "sweepcert/surface.hpp"
#include "sweepcert/sweep.hpp"

namespace sweepcert {

// Sweeps a region of tiny area by packing it with small balls and sweeping
// the balls one at a time, reusing each stage's cut as the seam into the
// next. Regions holding too many balls are first split by a short tube
// boundary around a tenth of the centers, then the two halves recurse.

struct SmallVolumeOptions {
  int fanout = 100;        // max balls merged directly in one pass
  double max_lip = 1.01;   // chart distortion gate
  int level_samples = 256; // radius scan resolution per coarea search
  int per_edge = 3;        // Steiner nodes per edge for distance fields
  int max_depth = 64;      // split recursion guard
};

struct BallStage {
  int center = -1;
  double radius = 0;   // chosen concentric cut radius
  double cut_len = 0;  // measured level length at that radius
  double chart_lip = 1;
};

struct SmallVolumeSweep {
  ConformalSurface surf;        // input surface with all cuts applied
  std::vector<int> tri_origin;  // final triangle -> input triangle
  Region domain;                // image of the input region on `surf`
  SweepFunction f;
  double delta = 0;
  int ball_count = 0;      // balls in the top-level packing
  double cover_radius = 0; // packing quality: max vertex distance to centers
  double lip = 1;          // worst chart distortion across stages
  double bound = 0;        // certified width budget for the reported count
  double width_bound = 0;  // certified relative width of f
  double width_measured = 0;
  int tube_cuts = 0;       // splits taken by the over-fanout recursion
  std::vector<BallStage> stages;

  Region map_region(const Region& input) const;
};

// Width budget for sweeping k balls of radius <= delta.
double small_volume_bound(int k, double delta);

// Exact budget of the staged construction: 4d + 2d per merged ball, plus a
// 2d tube boundary per split level.
double small_volume_plan(int k, double delta, int fanout = 100);

// Largest ball scale whose worst-case budget stays under eps for a region
// of the given area.
double small_volume_delta(double area, double eps);

SmallVolumeSweep small_volume_sweep(const ConformalSurface& s, const Region& u,
                                    double eps,
                                    const SmallVolumeOptions& opt = {});
SmallVolumeSweep small_volume_sweep_delta(const ConformalSurface& s,
                                          const Region& u, double delta,
                                          const SmallVolumeOptions& opt = {});

} // namespace sweepcert
