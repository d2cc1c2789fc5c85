#pragma once

#include <string>
#include <vector>

#include "sweepcert/refine.hpp"
#include "sweepcert/smallvol.hpp"
#include "sweepcert/surface.hpp"
#include "sweepcert/sweep.hpp"
#include "sweepcert/tessellation.hpp"

namespace sweepcert {

// ── certificates ────────────────────────────────────────────────────────────
//
// Every construction returns, next to its geometric output, a tree of
// measured-versus-bound comparisons. Nothing in a certificate is assumed:
// `measured` is evaluated on the produced mesh, `bound` is the claimed
// inequality right-hand side, and `pass` is the comparison verdict.

struct CertEntry {
  std::string op;
  double measured = 0;
  double bound = 0;
  double tol = 0;  // relative slack already folded into `bound`
  bool pass = false;
  std::string detail;
  std::vector<CertEntry> children;

  bool all_pass() const;
  std::string to_text() const;  // deterministic rendering, one line per entry
};

struct EngineOptions {
  double tol = 0.02;          // relative slack on measured-length bounds
  int level_samples = 256;    // level scan resolution per cut
  int golden_iters = 24;      // golden-section refinement steps after the scan
  int per_edge = 2;           // Steiner nodes per edge for distance fields
  int center_budget = 32;     // candidate centers tried per ball capture
  int leaf_splits = 16;       // covering sweep bisects until mu <= mu(U)/this
  int min_leaf_tris = 12;     // regions at most this many triangles stay whole
  int max_depth = 64;
  SmallVolumeOptions smallvol;
};

// ── coarea cut ──────────────────────────────────────────────────────────────
//
// Level cut of the model-metric distance field d(., U) restricted to V,
// searched over (0, r) for the shortest original-length level. The certified
// bound is sqrt(mu0(A)) * sqrt(mu(A)) / r on the annulus
// A = {x in V : d(x, U) < r} \ U, both measures taken on the input mesh.

struct CoareaCut {
  ConformalSurface surf;
  RefineMap map;
  Region grown;                // U together with the sublevel part of V
  std::vector<int> cut_edges;  // on `surf`
  double cut_len = 0;          // original metric
  double level = 0;
  double mu0_annulus = 0;  // model area of A
  double mu_annulus = 0;   // original area of A
  CertEntry cert;
};

CoareaCut coarea_cut(const ConformalSurface& s, const Region& u,
                     const Region& v, double r, const EngineOptions& opt = {});

// ── balanced cut ────────────────────────────────────────────────────────────
//
// Splits U into two parts of original area at most (43/44) mu(U) each by
// growing the smallest ball capturing mu(U)/44 around the best of a vertex
// candidate pool, then cutting the annulus at radius/2. The cut length is
// certified against 5.58 sqrt(mu(U)).

struct BalancedCut {
  ConformalSurface surf;
  RefineMap map;
  Region part1, part2;
  std::vector<int> cut_edges;
  double cut_len = 0;
  int center = -1;
  double radius = 0;
  CertEntry cert;
};

BalancedCut balanced_cut(const ConformalSurface& s, const Region& u,
                         int tile_cover, const EngineOptions& opt = {});

// ── covering sweep ──────────────────────────────────────────────────────────
//
// Monotone sweep of a region covered by at most 40 certified tiles, with
// free width certified against 489 sqrt(mu(U)). Regions below the
// small-volume envelope scale delegate to small_volume_sweep_delta; larger
// regions are bisected by balanced cuts until each piece is leaf-sized, the
// leaves are developed into charts and swept by the chart coordinate, and
// the pieces are concatenated in recursion order. Internal seams stay plain
// jump edges, so the width already counts their lit portions.

struct CoveringSweep {
  ConformalSurface surf;
  std::vector<int> tri_origin;  // triangle of the input mesh
  Region domain;
  SweepFunction f;
  double width_bound = 0;     // certified free width
  double width_measured = 0;  // largest sampled level length
  double delta = 0;           // small-volume envelope scale for eps
  int leaf_count = 0;
  int depth = 0;
  CertEntry cert;

  Region map_region(const Region& input) const;
};

CoveringSweep small_covering_sweep(const ConformalSurface& s, const Region& u,
                                   const Tessellation& tess,
                                   const std::vector<int>& tiles, double eps,
                                   const EngineOptions& opt = {});

// ── nice covering ───────────────────────────────────────────────────────────
//
// Partition of U into at most m + max(m, 43k) regions of original area at
// most mu(U)/k, each meeting at most 40 tiles, with the total interior
// frontier length certified against
// (94.6 sqrt(m) + 36.6 sqrt(max(m, 43k))) sqrt(mu(U)). Step one grows whole
// tile pieces inside their half-neighborhoods; step two peels balls that
// capture mu(U)/N until every remainder is small.

struct Covering {
  ConformalSurface surf;
  std::vector<int> tri_origin;
  std::vector<Region> regions;
  std::vector<std::vector<int>> region_tiles;  // covering tile indices
  std::vector<int> tile_cover;                 // tiles met, per region
  std::vector<double> mu;                      // original area, per region
  std::vector<Region> tiles;                   // input tiles on `surf`
  std::vector<int> gamma_edges;                // inter-region frontier
  double gamma_len = 0;
  double mu_total = 0;
  int m = 0;        // step-one pieces
  int k = 1;
  int n_split = 0;  // N = max(m, 43k)
  CertEntry cert;
};

Covering nice_covering(const ConformalSurface& s, const Region& u,
                       const Tessellation& tess, int k,
                       const EngineOptions& opt = {});

// ── sweepout assembly ───────────────────────────────────────────────────────
//
// One monotone sweep of the whole covering: every region is swept in order
// by its own covering sweep and the stages are concatenated, declaring
// exactly the inter-region frontier as the gamma curve. The free width is
// certified against 489 sqrt(mu(M)/k) + eps; the k-sweepout bound is
// B = k * width_free + length(gamma).

struct OneSweepout {
  ConformalSurface surf;
  std::vector<int> tri_origin;  // triangle of the covering's input mesh
  SweepFunction f;
  double width_free_bound = 0;
  double width_free_measured = 0;
  double gamma_len = 0;
  CertEntry cert;
};

OneSweepout build_one_sweepout(const Covering& c, double eps,
                               const EngineOptions& opt = {});

struct KSweepout {
  OneSweepout base;
  int k = 1;
  double bound = 0;  // k * width_free_bound + gamma_len
  CertEntry cert;
};

KSweepout assemble_k_sweepout(OneSweepout base, int k);

// Mod-2 sum of level cycles at the given parameters (1 <= count <= k).
Cycle1 sample_k_cycle(const KSweepout& ks, const std::vector<double>& ts);

// ── main bound ──────────────────────────────────────────────────────────────

struct MainBoundReport {
  double b = 0;
  double mu = 0;
  int k = 1;
  int genus = 0;
  double bound_main = 0;   // 1600 max(sqrt k, sqrt g) sqrt(mu)
  double bound_sharp = 0;  // 489 sqrt k + lower-order covering terms
  bool pass_main = false;
  bool pass_sharp = false;
  CertEntry cert;
};

MainBoundReport verify_main_bound(const ConformalSurface& s,
                                  const KSweepout& ks);

} // namespace sweepcert
