#pragma once

#include <array>
#include <string>
#include <vector>

#include "sweepcert/geometry.hpp"

namespace sweepcert {

struct SideRef {
  int tri = -1;
  int side = -1;
  bool valid() const { return tri >= 0; }
  bool operator==(const SideRef& o) const { return tri == o.tri && side == o.side; }
};

// Undirected edge of the triangulation. s0 fixes the canonical direction:
// parameter 0 sits at va = corner `side` of s0.tri. s1 is the glued partner
// side (invalid for boundary edges) and always runs anti-parallel.
struct Edge {
  int va = -1, vb = -1;
  SideRef s0, s1;
  double model_len = 0;
  double orig_len = 0;
  bool boundary() const { return !s1.valid(); }
};

// Side i connects corners i and (i+1)%3; edge[i] is the edge it lies on.
struct Tri {
  std::array<int, 3> v{-1, -1, -1};
  std::array<double, 3> len{0, 0, 0};
  std::array<int, 3> edge{-1, -1, -1};
};

struct TriSpec {
  std::array<int, 3> v;
  std::array<double, 3> len;
};

struct GluingSpec {
  int tri_a = -1, side_a = -1, tri_b = -1, side_b = -1;
};

struct BuildOptions {
  bool require_closed = true;
  bool validate_angle_sums = true;
  double angle_tol = 1e-6;
  double glue_len_tol = 1e-9;
};

// Immutable triangulated surface with a constant-curvature background metric
// (side lengths live in the model) and a conformal factor lambda per vertex.
// The surface carries two measurements everywhere: "model" quantities from
// the background metric and "orig" quantities from lambda^2 times it.
class ConformalSurface {
 public:
  Model model = Model::Flat;
  int genus = -1;
  bool closed = false;
  std::vector<double> lambda;
  std::vector<Tri> tris;
  std::vector<Edge> edges;
  std::vector<std::array<Vec3, 3>> placed;
  std::vector<double> tri_model_area;
  std::vector<double> tri_orig_area;
  double total_model_area = 0;
  double total_orig_area = 0;

  int nv() const { return (int)lambda.size(); }
  int nt() const { return (int)tris.size(); }
  int ne() const { return (int)edges.size(); }

  SideRef mate(int tri, int side) const;
  int neighbor(int tri, int side) const;

  // Interior angle at corner c of triangle t.
  double corner_angle(int t, int c) const;

  // Arclength-proportional point on side `side` of triangle t; u = 0 at
  // corner `side`.
  Vec3 side_point(int t, int side, double u) const;

  // Edge parameter (canonical direction) of side parameter u on (t, side).
  double edge_param_from_side(int t, int side, double u) const;
  double side_param_from_edge(int t, int side, double p) const;

  // lambda value at edge parameter p (projective interpolation).
  double lambda_on_edge(int e, double p) const;

  // Length of the edge sub-interval [p0, p1] in the lambda^2-scaled metric
  // (closed form in every model).
  double edge_orig_sublength(int e, double p0, double p1) const;

  double corner_lambda(int t, int c) const { return lambda[tris[t].v[c]]; }

  // Total turning angle collected around a vertex.
  std::vector<double> vertex_angle_sums() const;
};

ConformalSurface build_surface(Model model, std::vector<double> lambda,
                               std::vector<TriSpec> tri_specs,
                               const std::vector<GluingSpec>& gluings,
                               const BuildOptions& opt = {});

// Subset of triangles of a fixed surface, kept sorted.
struct Region {
  std::vector<int> tris;

  static Region whole(const ConformalSurface& s);
  bool contains(int t) const;
  bool empty() const { return tris.empty(); }
  int size() const { return (int)tris.size(); }
  void normalize();

  double model_area(const ConformalSurface& s) const;
  double orig_area(const ConformalSurface& s) const;

  // Edges with exactly one incident side inside the region (surface-boundary
  // sides count as outside).
  std::vector<int> boundary_edges(const ConformalSurface& s) const;
  // Edges whose both sides lie in the region.
  std::vector<int> interior_edges(const ConformalSurface& s) const;
  std::vector<int> vertex_set(const ConformalSurface& s) const;
  std::vector<Region> components(const ConformalSurface& s) const;

  Region set_minus(const Region& o) const;
  Region set_union(const Region& o) const;
  Region set_intersect(const Region& o) const;
};

} // namespace sweepcert
