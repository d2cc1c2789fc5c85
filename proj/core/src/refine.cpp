#include "sweepcert/refine.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <map>
#include <stdexcept>
#include <utility>

namespace sweepcert {

Region RefineMap::map_region(const Region& r) const {
  Region out;
  for (int t : r.tris)
    for (int c : tri_children[t]) out.tris.push_back(c);
  out.normalize();
  return out;
}

Refined subdivide4(const ConformalSurface& s) {
  const int nt = s.nt(), ne = s.ne(), nv = s.nv();
  std::vector<double> lambda = s.lambda;
  lambda.resize(nv + ne);
  for (int e = 0; e < ne; ++e)
    lambda[nv + e] = 0.5 * (s.lambda[s.edges[e].va] + s.lambda[s.edges[e].vb]);

  // Child c of triangle t gets index 4t + c. Children 0,1,2 sit at the
  // corners, child 3 is the middle. Parent side sd splits into child sd
  // (first half) and child (sd+1)%3 (second half), both as their side sd.
  std::vector<TriSpec> specs(4 * nt);
  std::vector<GluingSpec> glue;
  glue.reserve(3 * nt + 2 * ne);

  for (int t = 0; t < nt; ++t) {
    const Tri& tr = s.tris[t];
    int m[3];
    for (int sd = 0; sd < 3; ++sd) m[sd] = nv + tr.edge[sd];
    Vec3 mid[3];
    for (int sd = 0; sd < 3; ++sd)
      mid[sd] = point_lerp(s.model, s.placed[t][sd], s.placed[t][(sd + 1) % 3], 0.5);
    double chord[3]; // chord[i] connects mid[i] and mid[(i+1)%3]
    for (int i = 0; i < 3; ++i) chord[i] = point_dist(s.model, mid[i], mid[(i + 1) % 3]);

    double h[3];
    for (int sd = 0; sd < 3; ++sd) h[sd] = tr.len[sd] * 0.5;

    specs[4 * t + 0] = {{tr.v[0], m[0], m[2]}, {h[0], chord[2], h[2]}};
    specs[4 * t + 1] = {{m[0], tr.v[1], m[1]}, {h[0], h[1], chord[0]}};
    specs[4 * t + 2] = {{m[2], m[1], tr.v[2]}, {chord[1], h[1], h[2]}};
    specs[4 * t + 3] = {{m[0], m[1], m[2]}, {chord[0], chord[1], chord[2]}};

    glue.push_back({4 * t + 3, 0, 4 * t + 1, 2});
    glue.push_back({4 * t + 3, 1, 4 * t + 2, 0});
    glue.push_back({4 * t + 3, 2, 4 * t + 0, 1});
  }

  auto half_child = [&](SideRef sr, int half) {
    int c = (half == 0) ? sr.side : (sr.side + 1) % 3;
    return SideRef{4 * sr.tri + c, sr.side};
  };
  for (int e = 0; e < ne; ++e) {
    const Edge& ed = s.edges[e];
    if (ed.boundary()) continue;
    SideRef a0 = half_child(ed.s0, 0), a1 = half_child(ed.s0, 1);
    SideRef b0 = half_child(ed.s1, 0), b1 = half_child(ed.s1, 1);
    glue.push_back({a0.tri, a0.side, b1.tri, b1.side});
    glue.push_back({a1.tri, a1.side, b0.tri, b0.side});
  }

  BuildOptions opt;
  opt.require_closed = s.closed;
  opt.validate_angle_sums = s.closed;
  Refined out{build_surface(s.model, std::move(lambda), std::move(specs), glue, opt), {}};

  RefineMap& mp = out.map;
  mp.old_vertex_count = nv;
  mp.tri_children.resize(nt);
  mp.tri_parent.resize(4 * nt);
  for (int t = 0; t < nt; ++t) {
    mp.tri_children[t] = {4 * t, 4 * t + 1, 4 * t + 2, 4 * t + 3};
    for (int c = 0; c < 4; ++c) mp.tri_parent[4 * t + c] = t;
  }
  mp.edge_pieces.resize(ne);
  for (int e = 0; e < ne; ++e) {
    SideRef h0 = half_child(s.edges[e].s0, 0);
    SideRef h1 = half_child(s.edges[e].s0, 1);
    mp.edge_pieces[e] = {out.surf.tris[h0.tri].edge[h0.side],
                         out.surf.tris[h1.tri].edge[h1.side]};
  }
  return out;
}

namespace {

constexpr double kSplitSnap = 1e-9;

struct SplitPt {
  double p; // edge parameter
  int vid;  // vertex id on the new surface
};

} // namespace

LevelCut insert_level_cut(const ConformalSurface& s, const SweepFunction& f, double t) {
  const int nv = s.nv(), nt = s.nt(), ne = s.ne();
  const size_t nd = f.domain.tris.size();

  // ── crossing points of the level, per domain triangle ──
  struct ChordInfo {
    int nsides = 0;
    int side[2] = {-1, -1};
    double u[2] = {0, 0}; // side params
    int vid[2] = {-1, -1};
  };
  std::vector<ChordInfo> chord(nd);
  std::vector<std::vector<double>> raw(ne);
  for (size_t k = 0; k < nd; ++k) {
    int T = f.domain.tris[k];
    const auto& v = f.vals[k];
    for (int c = 0; c < 3; ++c)
      if (v[c] == t)
        throw std::invalid_argument("insert_level_cut: level equals a corner value");
    ChordInfo& ch = chord[k];
    for (int sd = 0; sd < 3; ++sd) {
      double va = v[sd], vb = v[(sd + 1) % 3];
      if ((va < t) == (vb < t)) continue;
      double d = s.tris[T].len[sd];
      double u = va < vb ? edge_crossing_param(s.model, d, t - va, vb - t)
                         : 1.0 - edge_crossing_param(s.model, d, t - vb, va - t);
      ch.side[ch.nsides] = sd;
      ch.u[ch.nsides] = u;
      ++ch.nsides;
      raw[s.tris[T].edge[sd]].push_back(s.edge_param_from_side(T, sd, u));
    }
  }

  // ── merge crossings into split vertices ──
  // Coincident crossings (the two sides of a continuous edge, or a jump edge
  // cut at matching heights) become one vertex. The new conformal factor is
  // interpolated linearly in arclength, which keeps the scaled length of a
  // split edge exactly the sum of its pieces.
  std::vector<std::vector<SplitPt>> splits(ne);
  std::vector<double> lambda = s.lambda;
  for (int e = 0; e < ne; ++e) {
    auto& r = raw[e];
    if (r.empty()) continue;
    std::sort(r.begin(), r.end());
    for (size_t i = 0; i < r.size();) {
      size_t j = i + 1;
      while (j < r.size() && r[j] - r[j - 1] < kSplitSnap) ++j;
      double p = 0;
      for (size_t q = i; q < j; ++q) p += r[q];
      p /= double(j - i);
      if (p < kSplitSnap || p > 1.0 - kSplitSnap)
        throw std::invalid_argument("insert_level_cut: cut passes through a vertex");
      splits[e].push_back({p, (int)lambda.size()});
      const Edge& ed = s.edges[e];
      lambda.push_back((1.0 - p) * s.lambda[ed.va] + p * s.lambda[ed.vb]);
      i = j;
    }
  }
  for (size_t k = 0; k < nd; ++k) {
    int T = f.domain.tris[k];
    ChordInfo& ch = chord[k];
    for (int q = 0; q < ch.nsides; ++q) {
      int e = s.tris[T].edge[ch.side[q]];
      double p = s.edge_param_from_side(T, ch.side[q], ch.u[q]);
      const auto& sp = splits[e];
      size_t best = 0;
      for (size_t i = 1; i < sp.size(); ++i)
        if (std::abs(sp[i].p - p) < std::abs(sp[best].p - p)) best = i;
      ch.vid[q] = sp[best].vid;
    }
  }

  // sub-side lengths shared by both sides of each edge, in edge order
  std::vector<std::vector<double>> piece_len(ne);
  for (int e = 0; e < ne; ++e) {
    double d = s.edges[e].model_len, prev = 0.0;
    for (const SplitPt& sp : splits[e]) {
      piece_len[e].push_back(d * (sp.p - prev));
      prev = sp.p;
    }
    piece_len[e].push_back(d * (1.0 - prev));
  }

  // ── re-triangulate every touched triangle ──
  std::vector<int> dom_of(nt, -1);
  for (size_t k = 0; k < nd; ++k) dom_of[f.domain.tris[k]] = (int)k;

  std::vector<TriSpec> specs;
  std::vector<GluingSpec> glue;
  RefineMap mp;
  mp.old_vertex_count = nv;
  mp.tri_children.resize(nt);
  std::vector<int> tri_parent;
  std::vector<char> cls_of; // per new tri: 1 below, 0 above, 2 outside domain

  struct Owner {
    int tri = -1, side = -1;
  };
  std::vector<std::vector<Owner>> own0(ne), own1(ne);
  for (int e = 0; e < ne; ++e) {
    own0[e].resize(splits[e].size() + 1);
    own1[e].resize(splits[e].size() + 1);
  }
  std::vector<std::pair<int, int>> cut_sides; // one (new tri, side) per chord

  struct BPt {
    int vid;
    Vec3 pos;    // position in the old triangle's frame
    int on_side; // side carrying the segment [this point, next point]
    int piece;   // side-order piece index starting here
    int corner;  // corner index, or -1 for split points
  };

  for (int T = 0; T < nt; ++T) {
    std::vector<BPt> poly;
    for (int sd = 0; sd < 3; ++sd) {
      poly.push_back({s.tris[T].v[sd], s.placed[T][sd], sd, 0, sd});
      int e = s.tris[T].edge[sd];
      int m = (int)splits[e].size();
      bool fwd = s.edges[e].s0.tri == T && s.edges[e].s0.side == sd;
      for (int i = 0; i < m; ++i) {
        const SplitPt& sp = splits[e][fwd ? i : m - 1 - i];
        double u = s.side_param_from_edge(T, sd, sp.p);
        poly.push_back({sp.vid, s.side_point(T, sd, u), sd, i + 1, -1});
      }
    }
    const int N = (int)poly.size();
    int dk = dom_of[T];
    bool has_chord = dk >= 0 && chord[dk].nsides == 2;

    int ca = -1, cb = -1; // chord endpoints as polygon positions
    if (has_chord) {
      for (int i = 0; i < N; ++i) {
        if (poly[i].corner >= 0) continue;
        if (poly[i].vid == chord[dk].vid[0]) ca = i;
        if (poly[i].vid == chord[dk].vid[1]) cb = i;
      }
      if (ca < 0 || cb < 0 || ca == cb)
        throw std::logic_error("insert_level_cut: lost a chord endpoint");
      if (ca > cb) std::swap(ca, cb);
    }

    // one cycle per piece: the polygon, split along the chord if present
    std::vector<std::vector<int>> cycles;
    if (has_chord) {
      std::vector<int> A, B;
      for (int i = ca; i <= cb; ++i) A.push_back(i);
      for (int i = cb; i != ca; i = (i + 1) % N) B.push_back(i);
      B.push_back(ca);
      cycles = {std::move(A), std::move(B)};
    } else {
      cycles.emplace_back(N);
      for (int i = 0; i < N; ++i) cycles[0][i] = i;
    }

    std::map<std::pair<int, int>, std::vector<std::pair<int, int>>> inner;
    const std::pair<int, int> chord_key{ca, cb};

    // length of the segment between polygon positions x and y, matching the
    // side classification used when the triangle is emitted
    auto seg_for = [&](int x, int y) -> double {
      std::pair<int, int> key{std::min(x, y), std::max(x, y)};
      if (has_chord && key == chord_key)
        return point_dist(s.model, poly[key.first].pos, poly[key.second].pos);
      if ((x + 1) % N == y) {
        int sd = poly[x].on_side;
        int e = s.tris[T].edge[sd];
        int m = (int)splits[e].size();
        bool fwd = s.edges[e].s0.tri == T && s.edges[e].s0.side == sd;
        int ep = fwd ? poly[x].piece : m - poly[x].piece;
        return piece_len[e][ep];
      }
      return point_dist(s.model, poly[x].pos, poly[y].pos);
    };

    for (const auto& cyc : cycles) {
      char cls = 2;
      if (dk >= 0) {
        for (int pos : cyc)
          if (poly[pos].corner >= 0) {
            cls = f.vals[dk][poly[pos].corner] < t ? 1 : 0;
            break;
          }
      }

      auto emit = [&](int i0, int i1, int i2) {
        int id = (int)specs.size();
        TriSpec ts;
        ts.v = {poly[i0].vid, poly[i1].vid, poly[i2].vid};
        const int pp[3][2] = {{i0, i1}, {i1, i2}, {i2, i0}};
        for (int sdn = 0; sdn < 3; ++sdn) {
          int x = pp[sdn][0], y = pp[sdn][1];
          std::pair<int, int> key{std::min(x, y), std::max(x, y)};
          ts.len[sdn] = seg_for(x, y);
          if (has_chord && key == chord_key) {
            inner[key].push_back({id, sdn});
          } else if ((x + 1) % N == y) {
            int sd = poly[x].on_side;
            int e = s.tris[T].edge[sd];
            int m = (int)splits[e].size();
            bool fwd = s.edges[e].s0.tri == T && s.edges[e].s0.side == sd;
            int ep = fwd ? poly[x].piece : m - poly[x].piece;
            (fwd ? own0 : own1)[e][ep] = {id, sdn};
          } else {
            inner[key].push_back({id, sdn});
          }
        }
        specs.push_back(ts);
        mp.tri_children[T].push_back(id);
        tri_parent.push_back(T);
        cls_of.push_back(cls);
      };

      // Split points sit on the old sides, so collinear triples lurk wherever
      // a fixed fan apex (or a greedy ear) could land. The maximin-slack
      // triangulation dodges every one of them and keeps the fattest chords;
      // a positive choice always exists because each sub-polygon cut off by
      // a chord to an off-side point is again a triangle with side points.
      const int Q = (int)cyc.size();
      if (Q == 3) {
        emit(cyc[0], cyc[1], cyc[2]);
        continue;
      }
      std::vector<std::vector<double>> M(Q, std::vector<double>(Q, 0.0));
      std::vector<std::vector<int>> K(Q, std::vector<int>(Q, -1));
      for (int i = 0; i + 1 < Q; ++i)
        M[i][i + 1] = std::numeric_limits<double>::infinity();
      for (int span = 2; span < Q; ++span)
        for (int i = 0; i + span < Q; ++i) {
          int j = i + span;
          for (int k = i + 1; k < j; ++k) {
            double sl = triangle_slack(s.model, seg_for(cyc[j], cyc[i]),
                                       seg_for(cyc[i], cyc[k]),
                                       seg_for(cyc[k], cyc[j]));
            double m = std::min({sl, M[i][k], M[k][j]});
            if (m > M[i][j]) {
              M[i][j] = m;
              K[i][j] = k;
            }
          }
        }
      if (!(M[0][Q - 1] > 0))
        throw std::logic_error("insert_level_cut: degenerate face polygon");
      std::function<void(int, int)> rec = [&](int i, int j) {
        if (j - i < 2) return;
        int k = K[i][j];
        rec(i, k);
        emit(cyc[i], cyc[k], cyc[j]);
        rec(k, j);
      };
      rec(0, Q - 1);
    }

    for (const auto& [key, sides] : inner) {
      if (sides.size() != 2)
        throw std::logic_error("insert_level_cut: fan chord not shared by two triangles");
      glue.push_back({sides[0].first, sides[0].second, sides[1].first, sides[1].second});
      if (has_chord && key == chord_key) cut_sides.push_back(sides[0]);
    }
  }

  // old-edge pieces
  for (int e = 0; e < ne; ++e) {
    if (s.edges[e].boundary()) continue;
    for (size_t i = 0; i < own0[e].size(); ++i) {
      const Owner& a = own0[e][i];
      const Owner& b = own1[e][i];
      if (a.tri < 0 || b.tri < 0)
        throw std::logic_error("insert_level_cut: unowned edge piece");
      glue.push_back({a.tri, a.side, b.tri, b.side});
    }
  }

  BuildOptions opt;
  opt.require_closed = s.closed;
  opt.validate_angle_sums = s.closed;
  LevelCut out;
  out.surf = build_surface(s.model, std::move(lambda), std::move(specs), glue, opt);
  if (s.closed && out.surf.genus != s.genus)
    throw std::logic_error("insert_level_cut: cut changed the topology");

  out.map = std::move(mp);
  out.map.tri_parent = std::move(tri_parent);
  out.map.edge_pieces.resize(ne);
  for (int e = 0; e < ne; ++e)
    for (const Owner& o : own0[e])
      out.map.edge_pieces[e].push_back(out.surf.tris[o.tri].edge[o.side]);
  for (const auto& [tri, side] : cut_sides)
    out.cut_edges.push_back(out.surf.tris[tri].edge[side]);
  std::sort(out.cut_edges.begin(), out.cut_edges.end());
  for (size_t i = 0; i < cls_of.size(); ++i) {
    if (cls_of[i] == 1) out.below.tris.push_back((int)i);
    if (cls_of[i] == 0) out.above.tris.push_back((int)i);
  }
  out.below.normalize();
  out.above.normalize();
  return out;
}

} // namespace sweepcert
