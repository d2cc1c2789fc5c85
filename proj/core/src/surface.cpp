#include "sweepcert/surface.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sweepcert {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::runtime_error("surface: " + msg); }

double orig_area_recurse(Model m, const Vec3& p0, const Vec3& p1, const Vec3& p2,
                         double l0, double l1, double l2, int depth) {
  double area = tri_area_from_sides(m, point_dist(m, p0, p1), point_dist(m, p1, p2),
                                    point_dist(m, p2, p0));
  double lc = (l0 + l1 + l2) / 3.0;
  double coarse = lc * lc * area;
  Vec3 m01 = point_lerp(m, p0, p1, 0.5);
  Vec3 m12 = point_lerp(m, p1, p2, 0.5);
  Vec3 m20 = point_lerp(m, p2, p0, 0.5);
  double l01 = 0.5 * (l0 + l1), l12 = 0.5 * (l1 + l2), l20 = 0.5 * (l2 + l0);
  auto piece = [&](const Vec3& a, const Vec3& b, const Vec3& c, double la, double lb,
                   double lcv) {
    double ar = tri_area_from_sides(m, point_dist(m, a, b), point_dist(m, b, c),
                                    point_dist(m, c, a));
    double lm = (la + lb + lcv) / 3.0;
    return lm * lm * ar;
  };
  double fine = piece(p0, m01, m20, l0, l01, l20) + piece(m01, p1, m12, l01, l1, l12) +
                piece(m20, m12, p2, l20, l12, l2) + piece(m01, m12, m20, l01, l12, l20);
  if (depth >= 7 || std::abs(fine - coarse) < 1e-12 * (std::abs(fine) + 1e-30)) {
    return fine + (fine - coarse) / 3.0;
  }
  return orig_area_recurse(m, p0, m01, m20, l0, l01, l20, depth + 1) +
         orig_area_recurse(m, m01, p1, m12, l01, l1, l12, depth + 1) +
         orig_area_recurse(m, m20, m12, p2, l20, l12, l2, depth + 1) +
         orig_area_recurse(m, m01, m12, m20, l01, l12, l20, depth + 1);
}

} // namespace

SideRef ConformalSurface::mate(int t, int side) const {
  const Edge& e = edges[tris[t].edge[side]];
  SideRef me{t, side};
  return (e.s0 == me) ? e.s1 : e.s0;
}

int ConformalSurface::neighbor(int t, int side) const {
  SideRef m = mate(t, side);
  return m.tri;
}

double ConformalSurface::corner_angle(int t, int c) const {
  const Tri& tr = tris[t];
  return tri_angle(model, tr.len[(c + 1) % 3], tr.len[c], tr.len[(c + 2) % 3]);
}

Vec3 ConformalSurface::side_point(int t, int side, double u) const {
  return point_lerp(model, placed[t][side], placed[t][(side + 1) % 3], u);
}

double ConformalSurface::edge_param_from_side(int t, int side, double u) const {
  const Edge& e = edges[tris[t].edge[side]];
  return (e.s0 == SideRef{t, side}) ? u : 1.0 - u;
}

double ConformalSurface::side_param_from_edge(int t, int side, double p) const {
  const Edge& e = edges[tris[t].edge[side]];
  return (e.s0 == SideRef{t, side}) ? p : 1.0 - p;
}

double ConformalSurface::lambda_on_edge(int e, double p) const {
  const Edge& ed = edges[e];
  double la = lambda[ed.va], lb = lambda[ed.vb];
  if (model == Model::Flat || ed.model_len < 1e-13) return la + (lb - la) * p;
  double d = ed.model_len;
  double w0, w1;
  if (model == Model::Hyperbolic) {
    w0 = std::sinh((1.0 - p) * d);
    w1 = std::sinh(p * d);
  } else {
    double th = d / kSphereRadius;
    w0 = std::sin((1.0 - p) * th);
    w1 = std::sin(p * th);
  }
  return (la * w0 + lb * w1) / (w0 + w1);
}

double ConformalSurface::edge_orig_sublength(int e, double p0, double p1) const {
  const Edge& ed = edges[e];
  if (p1 < p0) std::swap(p0, p1);
  double la = lambda[ed.va], lb = lambda[ed.vb];
  double d = ed.model_len;
  if (model == Model::Flat || d < 1e-13) {
    double va = la + (lb - la) * p0, vb = la + (lb - la) * p1;
    return 0.5 * (va + vb) * (p1 - p0) * d;
  }
  // Integrate the projective weights in closed form.  With u = d/2 - s the
  // odd part contributes a log-cosh (log-cos) term that cancels only on the
  // full edge.
  if (model == Model::Hyperbolic) {
    double s0 = p0 * d, s1 = p1 * d;
    double u0 = 0.5 * d - s0, u1 = 0.5 * d - s1;
    double odd = 0.5 * (std::cosh(0.5 * d) / std::sinh(0.5 * d)) *
                 (std::log(std::cosh(u0)) - std::log(std::cosh(u1)));
    double wa = 0.5 * (s1 - s0) + odd;
    double wb = 0.5 * (s1 - s0) - odd;
    return la * wa + lb * wb;
  }
  double th = d / kSphereRadius;
  double f0 = p0 * th, f1 = p1 * th;
  double u0 = 0.5 * th - f0, u1 = 0.5 * th - f1;
  double odd = 0.5 * (std::cos(0.5 * th) / std::sin(0.5 * th)) *
               (std::log(std::cos(u0)) - std::log(std::cos(u1)));
  double wa = 0.5 * (f1 - f0) - odd;
  double wb = 0.5 * (f1 - f0) + odd;
  return kSphereRadius * (la * wa + lb * wb);
}

std::vector<double> ConformalSurface::vertex_angle_sums() const {
  std::vector<double> sums(nv(), 0.0);
  for (int t = 0; t < nt(); ++t)
    for (int c = 0; c < 3; ++c) sums[tris[t].v[c]] += corner_angle(t, c);
  return sums;
}

ConformalSurface build_surface(Model model, std::vector<double> lambda,
                               std::vector<TriSpec> tri_specs,
                               const std::vector<GluingSpec>& gluings,
                               const BuildOptions& opt) {
  ConformalSurface s;
  s.model = model;
  s.lambda = std::move(lambda);
  const int nv = (int)s.lambda.size();
  const int nt = (int)tri_specs.size();
  if (nt == 0) fail("no triangles");
  for (int i = 0; i < nv; ++i) {
    double l = s.lambda[i];
    if (!(l > 0) || !std::isfinite(l)) fail("conformal factor must be positive and finite");
  }

  s.tris.resize(nt);
  for (int t = 0; t < nt; ++t) {
    const TriSpec& ts = tri_specs[t];
    for (int c = 0; c < 3; ++c) {
      if (ts.v[c] < 0 || ts.v[c] >= nv) fail("triangle vertex id out of range");
      if (!(ts.len[c] > 0) || !std::isfinite(ts.len[c])) fail("side length must be positive");
    }
    if (triangle_slack(model, ts.len[0], ts.len[1], ts.len[2]) <= 0)
      fail("triangle inequality violated at triangle " + std::to_string(t));
    s.tris[t].v = ts.v;
    s.tris[t].len = ts.len;
  }

  // Pair sides into edges from the explicit gluing list.
  std::vector<std::array<int, 3>> side_edge(nt, {-1, -1, -1});
  for (const GluingSpec& g : gluings) {
    auto check_side = [&](int t, int sd) {
      if (t < 0 || t >= nt || sd < 0 || sd > 2) fail("gluing reference out of range");
    };
    check_side(g.tri_a, g.side_a);
    check_side(g.tri_b, g.side_b);
    if (g.tri_a == g.tri_b && g.side_a == g.side_b) fail("side glued to itself");
    if (side_edge[g.tri_a][g.side_a] != -1 || side_edge[g.tri_b][g.side_b] != -1)
      fail("side glued more than once");
    const Tri& ta = s.tris[g.tri_a];
    const Tri& tb = s.tris[g.tri_b];
    int a0 = ta.v[g.side_a], a1 = ta.v[(g.side_a + 1) % 3];
    int b0 = tb.v[g.side_b], b1 = tb.v[(g.side_b + 1) % 3];
    if (a0 != b1 || a1 != b0) fail("glued sides must run through the same vertices anti-parallel");
    double la = ta.len[g.side_a], lb = tb.len[g.side_b];
    if (std::abs(la - lb) > opt.glue_len_tol * std::max(1.0, std::abs(la)))
      fail("glued sides have different lengths");
    Edge e;
    e.va = a0;
    e.vb = a1;
    e.s0 = {g.tri_a, g.side_a};
    e.s1 = {g.tri_b, g.side_b};
    e.model_len = la;
    int id = (int)s.edges.size();
    s.edges.push_back(e);
    side_edge[g.tri_a][g.side_a] = id;
    side_edge[g.tri_b][g.side_b] = id;
  }
  for (int t = 0; t < nt; ++t)
    for (int sd = 0; sd < 3; ++sd)
      if (side_edge[t][sd] == -1) {
        Edge e;
        e.va = s.tris[t].v[sd];
        e.vb = s.tris[t].v[(sd + 1) % 3];
        e.s0 = {t, sd};
        e.model_len = s.tris[t].len[sd];
        side_edge[t][sd] = (int)s.edges.size();
        s.edges.push_back(e);
      }
  for (int t = 0; t < nt; ++t) s.tris[t].edge = side_edge[t];

  int boundary_sides = 0;
  for (const Edge& e : s.edges)
    if (e.boundary()) ++boundary_sides;
  s.closed = (boundary_sides == 0);
  if (opt.require_closed && !s.closed) fail("surface has unglued sides");

  // Geometry caches.
  s.placed.resize(nt);
  s.tri_model_area.resize(nt);
  s.tri_orig_area.resize(nt);
  for (int t = 0; t < nt; ++t) {
    const Tri& tr = s.tris[t];
    s.placed[t] = place_triangle(model, tr.len[0], tr.len[1], tr.len[2]);
    s.tri_model_area[t] = tri_area_from_sides(model, tr.len[0], tr.len[1], tr.len[2]);
    double l0 = s.lambda[tr.v[0]], l1 = s.lambda[tr.v[1]], l2 = s.lambda[tr.v[2]];
    if (model == Model::Flat) {
      double sum = l0 + l1 + l2;
      s.tri_orig_area[t] = s.tri_model_area[t] * (sum * sum + l0 * l0 + l1 * l1 + l2 * l2) / 12.0;
    } else if (l0 == 1.0 && l1 == 1.0 && l2 == 1.0) {
      s.tri_orig_area[t] = s.tri_model_area[t];
    } else {
      s.tri_orig_area[t] = orig_area_recurse(model, s.placed[t][0], s.placed[t][1],
                                             s.placed[t][2], l0, l1, l2, 0);
    }
    s.total_model_area += s.tri_model_area[t];
    s.total_orig_area += s.tri_orig_area[t];
  }
  for (Edge& e : s.edges)
    e.orig_len = edge_lambda_integral(s.lambda[e.va], s.lambda[e.vb], e.model_len);

  if (s.closed) {
    // Connectivity over gluings.
    std::vector<char> seen(nt, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
      int t = stack.back();
      stack.pop_back();
      for (int sd = 0; sd < 3; ++sd) {
        int n = s.neighbor(t, sd);
        if (n >= 0 && !seen[n]) {
          seen[n] = 1;
          ++count;
          stack.push_back(n);
        }
      }
    }
    if (count != nt) fail("closed surface must be connected");

    int chi = s.nv() - s.ne() + s.nt();
    if (chi % 2 != 0 || chi > 2) fail("impossible Euler characteristic");
    s.genus = (2 - chi) / 2;

    // The global model checks assume every vertex is smooth; skipping the
    // angle-sum validation admits cone points, where they no longer apply.
    if (opt.validate_angle_sums) {
      auto sums = s.vertex_angle_sums();
      for (int v = 0; v < s.nv(); ++v)
        if (std::abs(sums[v] - 2 * kPi) > opt.angle_tol)
          fail("vertex " + std::to_string(v) + " has angle sum " + std::to_string(sums[v]));

      if (model == Model::Hyperbolic) {
        double target = 4.0 * kPi * (s.genus - 1);
        if (s.genus < 2 || std::abs(s.total_model_area - target) > 1e-6 * std::max(1.0, target))
          fail("hyperbolic area incompatible with genus");
      } else if (model == Model::Spherical) {
        if (s.genus != 0 || std::abs(s.total_model_area - 1.0) > 1e-6)
          fail("spherical surface must be the whole unit-area sphere");
      } else if (s.genus != 1) {
        fail("flat closed surface must have genus 1");
      }
    }
  }
  return s;
}

// ── Region ──

Region Region::whole(const ConformalSurface& s) {
  Region r;
  r.tris.resize(s.nt());
  for (int t = 0; t < s.nt(); ++t) r.tris[t] = t;
  return r;
}

bool Region::contains(int t) const {
  return std::binary_search(tris.begin(), tris.end(), t);
}

void Region::normalize() {
  std::sort(tris.begin(), tris.end());
  tris.erase(std::unique(tris.begin(), tris.end()), tris.end());
}

double Region::model_area(const ConformalSurface& s) const {
  double a = 0;
  for (int t : tris) a += s.tri_model_area[t];
  return a;
}

double Region::orig_area(const ConformalSurface& s) const {
  double a = 0;
  for (int t : tris) a += s.tri_orig_area[t];
  return a;
}

std::vector<int> Region::boundary_edges(const ConformalSurface& s) const {
  std::vector<int> out;
  for (int t : tris)
    for (int sd = 0; sd < 3; ++sd) {
      const Edge& e = s.edges[s.tris[t].edge[sd]];
      int other = (e.s0 == SideRef{t, sd}) ? e.s1.tri : e.s0.tri;
      if (other < 0 || !contains(other)) out.push_back(s.tris[t].edge[sd]);
    }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<int> Region::interior_edges(const ConformalSurface& s) const {
  std::vector<int> out;
  for (int t : tris)
    for (int sd = 0; sd < 3; ++sd) {
      const Edge& e = s.edges[s.tris[t].edge[sd]];
      if (e.boundary()) continue;
      int other = (e.s0 == SideRef{t, sd}) ? e.s1.tri : e.s0.tri;
      if (other == t || (other >= 0 && contains(other))) out.push_back(s.tris[t].edge[sd]);
    }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<int> Region::vertex_set(const ConformalSurface& s) const {
  std::vector<int> out;
  for (int t : tris)
    for (int c = 0; c < 3; ++c) out.push_back(s.tris[t].v[c]);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<Region> Region::components(const ConformalSurface& s) const {
  std::vector<Region> comps;
  std::vector<char> seen(tris.size(), 0);
  for (size_t i = 0; i < tris.size(); ++i) {
    if (seen[i]) continue;
    Region comp;
    std::vector<int> stack{(int)i};
    seen[i] = 1;
    while (!stack.empty()) {
      int idx = stack.back();
      stack.pop_back();
      int t = tris[idx];
      comp.tris.push_back(t);
      for (int sd = 0; sd < 3; ++sd) {
        int n = s.neighbor(t, sd);
        if (n < 0) continue;
        auto it = std::lower_bound(tris.begin(), tris.end(), n);
        if (it != tris.end() && *it == n) {
          size_t j = (size_t)(it - tris.begin());
          if (!seen[j]) {
            seen[j] = 1;
            stack.push_back((int)j);
          }
        }
      }
    }
    comp.normalize();
    comps.push_back(std::move(comp));
  }
  return comps;
}

Region Region::set_minus(const Region& o) const {
  Region r;
  std::set_difference(tris.begin(), tris.end(), o.tris.begin(), o.tris.end(),
                      std::back_inserter(r.tris));
  return r;
}

Region Region::set_union(const Region& o) const {
  Region r;
  std::set_union(tris.begin(), tris.end(), o.tris.begin(), o.tris.end(),
                 std::back_inserter(r.tris));
  return r;
}

Region Region::set_intersect(const Region& o) const {
  Region r;
  std::set_intersection(tris.begin(), tris.end(), o.tris.begin(), o.tris.end(),
                        std::back_inserter(r.tris));
  return r;
}

} // namespace sweepcert
