#pragma once

#include <array>
#include <string>
#include <vector>

#include "sweepcert/cycle.hpp"
#include "sweepcert/surface.hpp"

namespace sweepcert {

// ── monotone sweeps ─────────────────────────────────────────────────────────
//
// A sweep is a piecewise-projective-linear function on a triangle region,
// with one value per triangle corner.  The family of cycles it generates is
// z_t = boundary of {f <= t}.  Discontinuities are allowed only across
// designated jump edges; edges on the domain boundary act as jumps against
// an outside that never sweeps.  gamma_edges mark the portion of the jump
// set whose level contribution is budgeted separately from the free width
// (the fixed curve a concatenated family keeps in every cycle).

struct SweepFunction {
  Region domain;
  std::vector<std::array<double, 3>> vals;  // parallel to domain.tris
  std::vector<int> jump_edges;              // sorted, interior to domain
  std::vector<int> gamma_edges;             // sorted, jump or boundary edges

  int domain_index(int tri) const;  // -1 when tri is not in the domain
  double min_value() const;
  double max_value() const;
};

struct SweepCheck {
  bool ok = true;
  std::string issue;
  double worst_mismatch = 0.0;  // largest cross-edge value disagreement
};

// Structural validation: finite values, jump edges interior to the domain
// with both sides present, gamma inside jump + boundary, and value
// continuity across every interior non-jump edge.
SweepCheck verify_monotone(const ConformalSurface& s, const SweepFunction& f);

// Affine rescale of the values onto [0,1] (constant sweeps map to 0.5).
SweepFunction normalize_sweep(SweepFunction f);

// The level cycle {f = t}, canonical.  t must not equal any corner value.
Cycle1 level_cycle(const ConformalSurface& s, const SweepFunction& f, double t);

// ── certified width ─────────────────────────────────────────────────────────
//
// The value axis is partitioned at the corner values.  On each open interval
// the level combinatorics are constant; `*_bound` is a proven upper bound
// for the corresponding length over the whole interval, `*_mid` the exact
// measure at the interval midpoint.  Lengths are in the lambda^2 metric.
// A terminal entry captures the state after the last event (the lit domain
// boundary).

// Per-interval certified bounds and midpoint measurements, split three ways:
// free (level chords and undeclared interior jumps), gamma (declared seam
// edges), bdry (lit parts of one-sided edges not declared gamma; these are
// relative-boundary mass, not cycle mass).
struct WidthInterval {
  double t0, t1;
  double free_bound, gamma_bound, bdry_bound;
  double free_mid, gamma_mid, bdry_mid;
};

struct WidthProfile {
  std::vector<WidthInterval> intervals;
  double sup_free_bound() const;
  double sup_rel_bound() const;   // free + gamma, boundary excluded
  double sup_total_bound() const; // free + gamma + bdry
  double max_free_measured() const;
  double max_total_measured() const;
};

WidthProfile width_profile(const ConformalSurface& s, const SweepFunction& f);

// Edges with one side in region a and the other in region b.
std::vector<int> frontier_edges(const ConformalSurface& s, const Region& a,
                                const Region& b);

// Concatenation: stage i is rescaled into the value band [i/N, (i+1)/N].
// Stage domains must be pairwise disjoint.  Jump and gamma edges gain the
// frontiers between stages; one-sided domain-boundary edges stay in the
// boundary channel.
SweepFunction concat_many(const ConformalSurface& s,
                          const std::vector<SweepFunction>& stages);

// Two-stage concatenation along an explicit shared curve; gamma must equal
// the exact frontier between the two domains.
SweepFunction concat_sweepouts(const ConformalSurface& s,
                               const SweepFunction& first,
                               const SweepFunction& second,
                               const std::vector<int>& gamma);

}  // namespace sweepcert
