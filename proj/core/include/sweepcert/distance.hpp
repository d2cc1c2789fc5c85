#pragma once

#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "sweepcert/surface.hpp"

namespace sweepcert {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Shortest paths over a triangulation augmented with evenly spaced nodes on
// every edge. Arcs connect any two nodes on the boundary of a common
// triangle by the geodesic chord between them, so every graph path is a
// genuine piecewise-geodesic curve on the surface and graph distances are
// upper bounds for surface distances. Arc weights are computed on demand
// from cached per-triangle placements.
class SteinerGraph {
 public:
  SteinerGraph(const ConformalSurface& s, int per_edge);

  const ConformalSurface& surface() const { return *surf_; }
  int per_edge() const { return per_edge_; }
  int node_count() const { return node_count_; }
  int vertex_node(int v) const { return v; }
  int edge_node(int e, int i) const { return surf_->nv() + e * per_edge_ + i; }
  bool is_vertex_node(int n) const { return n < surf_->nv(); }

  // Edge id and canonical parameter of a node (vertex nodes: edge -1).
  std::pair<int, double> node_edge_param(int n) const;

  struct Options {
    bool orig_metric = false;
    double stop_dist = kInf;
    double stop_capture_orig_area = kInf;
    const std::vector<std::uint8_t>* tri_mask = nullptr;
  };

  struct Result {
    std::vector<double> dist;
    double reached_orig_area = 0;
    double last_popped_dist = 0;
    bool stopped_early = false;
    // (distance, cumulative corner-dual original area) at vertex pops.
    std::vector<std::pair<double, double>> capture_profile;
  };

  Result run(const std::vector<std::pair<int, double>>& sources,
             const Options& opt) const;
  Result run(const std::vector<std::pair<int, double>>& sources) const {
    return run(sources, Options{});
  }

  // Convenience: distances for surface vertices only.
  std::vector<double> vertex_distances(const Result& r) const;

 private:
  struct Entry {
    int node;
    Vec3 pos;
    double lam;
  };

  const ConformalSurface* surf_;
  int per_edge_;
  int node_count_;
  std::vector<std::vector<Entry>> tri_nodes_;  // per triangle
  std::vector<std::vector<int>> vertex_tris_;  // incident triangles, deduped
  std::vector<double> vertex_dual_orig_;       // corner share of orig area

  double arc_weight(bool orig, int t, const Entry& a, const Entry& b) const;
};

// Model-metric distance field from source vertices, with the discretization
// gap between per_edge and 2*per_edge node densities.
struct DistanceField {
  std::vector<double> vertex_dist;
  double eps_disc = 0;
  int per_edge = 0;
};

DistanceField distance_field(const ConformalSurface& s,
                             const std::vector<int>& source_vertices,
                             int per_edge = 4, const Region* within = nullptr);

// Triangles whose minimal corner distance lies within r.
Region sublevel_region(const ConformalSurface& s, const std::vector<double>& vertex_dist,
                       double r);

} // namespace sweepcert
