#include "sweepcert/tessellation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>
#include <utility>

#include "sweepcert/chart.hpp"
#include "sweepcert/distance.hpp"
#include "sweepcert/geometry.hpp"

namespace sweepcert {

namespace {

constexpr double kLog2 = 0.69314718055994530942;

// Graph distances overestimate surface distances, so measured neighborhood
// queries widen the radius by this factor; overcounting neighbors is the
// safe direction for every downstream consumer.
constexpr double kNeighborSlack = 1.06;

constexpr double kTriAreaMin = 0.19, kTriAreaMax = 0.55;
constexpr double kQuadAreaMin = 0.26, kQuadAreaMax = 0.34;
constexpr int kNeighborCap = 40;

double max_model_edge(const ConformalSurface& s) {
  double m = 0;
  for (const Edge& e : s.edges) m = std::max(m, e.model_len);
  return m;
}

std::vector<std::vector<int>> vertex_tris(const ConformalSurface& s) {
  std::vector<std::vector<int>> vt(s.nv());
  for (int t = 0; t < s.nt(); ++t)
    for (int c = 0; c < 3; ++c) vt[s.tris[t].v[c]].push_back(t);
  return vt;
}

std::map<std::pair<int, int>, int> edge_lookup(const ConformalSurface& s) {
  std::map<std::pair<int, int>, int> mp;
  for (int e = 0; e < s.ne(); ++e) {
    int a = s.edges[e].va, b = s.edges[e].vb;
    mp[{std::min(a, b), std::max(a, b)}] = e;
  }
  return mp;
}

// Eight tiles of one collar: the band within b of the core, split into the
// two sides of the core and into quarters by position along it.
void build_collar_tiles(const ConformalSurface& s, const SteinerGraph& g,
                        const CollarDescriptor& cd,
                        const std::map<std::pair<int, int>, int>& elut,
                        std::vector<char>& claimed, std::vector<Tile>& tiles) {
  const int W = (int)cd.walk.size();
  if (W < 3) throw std::invalid_argument("collar walk too short");
  if (!(cd.model_length > 0) || cd.model_length > kLog2 + 1e-9)
    throw std::invalid_argument("collar core length outside (0, log 2]");
  double wref = std::asinh(1.0 / std::sinh(cd.model_length / 2));
  if (std::abs(cd.half_width - wref) > 1e-6 * (1 + wref))
    throw std::invalid_argument("collar half width inconsistent with core length");

  std::vector<int> wedge(W);
  std::vector<double> pos(W);
  double measured = 0;
  for (int i = 0; i < W; ++i) {
    int a = cd.walk[i], b = cd.walk[(i + 1) % W];
    auto it = elut.find({std::min(a, b), std::max(a, b)});
    if (a == b || it == elut.end())
      throw std::invalid_argument("collar walk leaves the mesh");
    wedge[i] = it->second;
    pos[i] = measured;
    measured += s.edges[wedge[i]].model_len;
  }
  if (std::abs(measured - cd.model_length) > 0.05 * cd.model_length)
    throw std::invalid_argument("collar core length mismatch beyond tolerance");

  const double h = cd.half_width - kLog2 / 2;
  const double stop = h + 3 * max_model_edge(s);

  // Nearest walk vertex (and its distance) per mesh vertex.
  std::vector<double> rho(s.nv(), kInf);
  std::vector<int> cap(s.nv(), -1);
  for (int i = 0; i < W; ++i) {
    SteinerGraph::Options opt;
    opt.stop_dist = stop;
    auto res = g.run({{g.vertex_node(cd.walk[i]), 0.0}}, opt);
    auto vd = g.vertex_distances(res);
    for (int v = 0; v < s.nv(); ++v)
      if (vd[v] < rho[v]) {
        rho[v] = vd[v];
        cap[v] = i;
      }
  }

  // Band triangles with their capture position along the core.
  std::vector<int> band;
  std::vector<int> band_cap(s.nt(), -1);
  for (int t = 0; t < s.nt(); ++t) {
    if (claimed[t]) continue;
    double best = kInf;
    int bc = -1;
    for (int c = 0; c < 3; ++c) {
      int v = s.tris[t].v[c];
      if (rho[v] < best) {
        best = rho[v];
        bc = cap[v];
      }
    }
    if (best <= h - 1e-9) {
      band.push_back(t);
      band_cap[t] = bc;
    }
  }

  // Components of the band with the core's edges removed split the two sides.
  std::set<int> wset(wedge.begin(), wedge.end());
  std::vector<char> in_band(s.nt(), 0);
  for (int t : band) in_band[t] = 1;
  std::vector<int> comp(s.nt(), -1);
  int ncomp = 0;
  for (int t0 : band) {
    if (comp[t0] >= 0) continue;
    std::vector<int> stack{t0};
    comp[t0] = ncomp;
    while (!stack.empty()) {
      int t = stack.back();
      stack.pop_back();
      for (int sd = 0; sd < 3; ++sd) {
        int e = s.tris[t].edge[sd];
        if (wset.count(e)) continue;
        int u = s.neighbor(t, sd);
        if (u < 0 || !in_band[u] || comp[u] >= 0) continue;
        comp[u] = ncomp;
        stack.push_back(u);
      }
    }
    ++ncomp;
  }

  std::vector<int> comp_side(ncomp, -1);
  auto mark = [&](int t, int side_of) {
    if (t < 0) return;
    if (claimed[t]) throw std::runtime_error("collar bands overlap");
    int c = comp[t];
    if (c < 0) throw std::runtime_error("collar core not inside its band");
    if (comp_side[c] == -1) comp_side[c] = side_of;
    else if (comp_side[c] != side_of)
      throw std::runtime_error("collar sides merge; mesh too coarse around the core");
  };
  for (int i = 0; i < W; ++i) {
    const Edge& e = s.edges[wedge[i]];
    bool fwd = e.va == cd.walk[i];
    mark(fwd ? e.s0.tri : (e.s1.valid() ? e.s1.tri : -1), 0);
    mark(fwd ? (e.s1.valid() ? e.s1.tri : -1) : e.s0.tri, 1);
  }
  for (int c = 0; c < ncomp; ++c)
    if (comp_side[c] == -1)
      throw std::runtime_error("collar band has a piece detached from the core");

  Region quads[2][4];
  for (int t : band) {
    int side_of = comp_side[comp[t]];
    // The bias keeps exact quarter-boundary positions in the upper quarter.
    int q = std::min(3, (int)std::floor(4.0 * pos[band_cap[t]] / measured + 1e-9));
    quads[side_of][q].tris.push_back(t);
  }
  QuadMeta meta = collar_quad_meta(cd.model_length, cd.half_width);
  for (int sd = 0; sd < 2; ++sd)
    for (int q = 0; q < 4; ++q) {
      if (quads[sd][q].empty())
        throw std::runtime_error("collar band too coarse for eight quadrilaterals");
      quads[sd][q].normalize();
      Tile tile;
      tile.region = quads[sd][q];
      tile.kind = TileKind::quadrilateral;
      tile.quad = meta;
      tiles.push_back(std::move(tile));
      for (int t : tiles.back().region.tris) claimed[t] = 1;
    }
}

// Nearest-center cells of a greedy maximal log(2)-separated vertex net.
void build_net_tiles(const ConformalSurface& s, const SteinerGraph& g,
                     const Region& thick, std::vector<Tile>& tiles) {
  std::vector<int> verts = thick.vertex_set(s);
  std::vector<double> best(s.nv(), kInf);
  std::vector<int> centers;
  std::vector<std::vector<double>> cdist;
  for (;;) {
    int pick = -1;
    double bd = -1;
    for (int v : verts)
      if (best[v] >= kLog2 && best[v] > bd) {
        bd = best[v];
        pick = v;
      }
    if (pick < 0) break;
    centers.push_back(pick);
    auto res = g.run({{g.vertex_node(pick), 0.0}});
    auto vd = g.vertex_distances(res);
    for (int v : verts) best[v] = std::min(best[v], vd[v]);
    cdist.push_back(std::move(vd));
  }

  std::vector<Region> cells(centers.size());
  for (int t : thick.tris) {
    int bestc = -1;
    double bd = kInf;
    for (int c = 0; c < (int)centers.size(); ++c) {
      double d = kInf;
      for (int k = 0; k < 3; ++k) d = std::min(d, cdist[c][s.tris[t].v[k]]);
      if (d < bd) {
        bd = d;
        bestc = c;
      }
    }
    if (bestc < 0) throw std::runtime_error("net cell assignment failed");
    cells[bestc].tris.push_back(t);
  }
  for (auto& cell : cells) {
    if (cell.empty()) continue;
    cell.normalize();
    Tile tile;
    tile.region = std::move(cell);
    tile.kind = TileKind::triangle;
    tiles.push_back(std::move(tile));
  }
}

} // namespace

QuadMeta collar_quad_meta(double core_length, double half_width) {
  QuadMeta q;
  q.a = core_length / 4;
  q.b = half_width - kLog2 / 2;
  q.c = std::asinh(std::sinh(q.a) * std::cosh(q.b));
  q.d = std::asinh(std::sinh(q.b) / std::cosh(q.c));
  q.phi = std::acos(std::sinh(q.a) * std::sinh(q.d));
  q.ideal_area = kPi / 2 - q.phi;
  return q;
}

Tessellation build_tessellation(const ConformalSurface& s,
                                const std::vector<CollarDescriptor>& collars,
                                const std::vector<Region>& tile_hint) {
  Tessellation out;

  if (!tile_hint.empty()) {
    std::vector<char> seen(s.nt(), 0);
    int total = 0;
    for (const Region& r : tile_hint) {
      for (int t : r.tris) {
        if (t < 0 || t >= s.nt() || seen[t])
          throw std::invalid_argument("tile hint is not a partition");
        seen[t] = 1;
        ++total;
      }
    }
    if (total != s.nt())
      throw std::invalid_argument("tile hint is not a partition");
    for (const Region& r : tile_hint) {
      Tile tile;
      tile.region = r;
      tile.region.normalize();
      tile.kind = TileKind::triangle;
      out.tiles.push_back(std::move(tile));
    }
    return out;
  }

  if (s.genus <= 1) {
    Tile tile;
    tile.region = Region::whole(s);
    tile.kind = TileKind::whole_surface;
    out.tiles.push_back(std::move(tile));
    return out;
  }

  SteinerGraph g(s, 2);
  std::vector<char> claimed(s.nt(), 0);
  if (!collars.empty()) {
    auto elut = edge_lookup(s);
    for (const CollarDescriptor& cd : collars)
      build_collar_tiles(s, g, cd, elut, claimed, out.tiles);
  }
  Region thick;
  for (int t = 0; t < s.nt(); ++t)
    if (!claimed[t]) thick.tris.push_back(t);
  if (!thick.empty()) build_net_tiles(s, g, thick, out.tiles);
  return out;
}

TessStats certify_tessellation(const ConformalSurface& s, Tessellation& t) {
  TessStats st;
  st.count = (int)t.tiles.size();
  const int cap = std::max(67 * (s.genus - 1), 1);

  std::vector<char> offending(st.count, 0);
  auto offend = [&](int i, const char* why) {
    offending[i] = 1;
    if (st.note.empty()) st.note = why;
  };

  std::vector<int> owner(s.nt(), -1);
  bool partition = true;
  for (int i = 0; i < st.count; ++i)
    for (int tri : t.tiles[i].region.tris) {
      if (tri < 0 || tri >= s.nt() || owner[tri] != -1) {
        partition = false;
        offend(i, "tiles do not partition the surface");
        continue;
      }
      owner[tri] = i;
    }
  for (int tri = 0; tri < s.nt() && partition; ++tri)
    if (owner[tri] == -1) {
      partition = false;
      if (st.note.empty()) st.note = "tiles do not partition the surface";
    }

  bool lone_whole = st.count == 1 && t.tiles[0].kind == TileKind::whole_surface;
  bool bands_ok = true;
  st.tri_area_min = st.quad_area_min = kInf;
  for (int i = 0; i < st.count; ++i) {
    const Tile& tile = t.tiles[i];
    double a = tile.region.model_area(s);
    if (tile.kind == TileKind::whole_surface) {
      if (!lone_whole) {
        bands_ok = false;
        offend(i, "whole-surface tile in a multi-tile tessellation");
      }
      continue;
    }
    if (tile.kind == TileKind::quadrilateral) {
      st.quad_area_min = std::min(st.quad_area_min, a);
      st.quad_area_max = std::max(st.quad_area_max, a);
      if (a < kQuadAreaMin || a > kQuadAreaMax) {
        bands_ok = false;
        offend(i, "quadrilateral area outside [0.26, 0.34]");
      }
    } else {
      st.tri_area_min = std::min(st.tri_area_min, a);
      st.tri_area_max = std::max(st.tri_area_max, a);
      if (a < kTriAreaMin || a > kTriAreaMax) {
        bands_ok = false;
        offend(i, "triangle area outside [0.19, 0.55]");
      }
    }
  }
  if (st.tri_area_min == kInf) st.tri_area_min = 0;
  if (st.quad_area_min == kInf) st.quad_area_min = 0;

  if (lone_whole) {
    st.neighbor_max = 1;
  } else {
    SteinerGraph g(s, 2);
    std::vector<std::vector<int>> vs(st.count);
    for (int i = 0; i < st.count; ++i) vs[i] = t.tiles[i].region.vertex_set(s);
    const double reach = 0.5 * kNeighborSlack;
    for (int i = 0; i < st.count; ++i) {
      std::vector<std::pair<int, double>> src;
      for (int v : vs[i]) src.push_back({g.vertex_node(v), 0.0});
      SteinerGraph::Options opt;
      opt.stop_dist = reach + 0.1;
      auto vd = g.vertex_distances(g.run(src, opt));
      int cnt = 0;
      for (int j = 0; j < st.count; ++j)
        for (int v : vs[j])
          if (vd[v] < reach) {
            ++cnt;
            break;
          }
      st.neighbor_max = std::max(st.neighbor_max, cnt);
    }
  }

  bool count_ok = st.count <= cap;
  if (!count_ok && st.note.empty()) st.note = "tile count above cap";
  bool nb_ok = st.neighbor_max <= kNeighborCap;
  if (!nb_ok && st.note.empty()) st.note = "half-neighborhood meets too many tiles";

  st.pass = partition && bands_ok && count_ok && nb_ok;
  for (int i = 0; i < st.count; ++i)
    if (offending[i]) st.offenders.push_back(i);
  t.stats = st;
  t.certified = st.pass;
  return st;
}

AnnulusCover annulus_ball_cover(const ConformalSurface& s,
                                const std::vector<Region>& tiles, int x,
                                double r) {
  if (!(r > 0)) throw std::invalid_argument("annulus radius must be positive");
  if (x < 0 || x >= s.nv())
    throw std::invalid_argument("annulus center out of range");

  std::vector<char> inmask(s.nt(), 0);
  for (const Region& reg : tiles)
    for (int t : reg.tris) inmask[t] = 1;
  auto vtris = vertex_tris(s);

  SteinerGraph g(s, 3);
  const double me = max_model_edge(s);
  SteinerGraph::Options ox;
  ox.stop_dist = 1.5 * r + 2 * me;
  auto resx = g.run({{g.vertex_node(x), 0.0}}, ox);

  auto node_in = [&](int n) {
    if (g.is_vertex_node(n)) {
      for (int t : vtris[n])
        if (inmask[t]) return true;
      return false;
    }
    auto [e, p] = g.node_edge_param(n);
    (void)p;
    const Edge& ed = s.edges[e];
    return (ed.s0.valid() && inmask[ed.s0.tri]) ||
           (ed.s1.valid() && inmask[ed.s1.tri]);
  };

  std::vector<int> annulus;
  for (int n = 0; n < g.node_count(); ++n) {
    double d = resx.dist[n];
    if (d >= r && d <= 1.5 * r && node_in(n)) annulus.push_back(n);
  }

  AnnulusCover out;
  out.sample_count = (int)annulus.size();
  if (annulus.empty()) {
    out.certified = true;
    return out;
  }

  // Ring seeds through a chart around x, snapped to mesh vertices.
  Region ballR = sublevel_region(s, g.vertex_distances(resx), 1.5 * r + me);
  Chart ch = chart_around(s, ballR, x);
  auto cp = ch.vertex_pos(x);
  auto snap = [&](double px, double py) {
    int bestv = -1;
    double bd = kInf;
    for (int k = 0; k < (int)ch.verts.size(); ++k) {
      double dx = ch.pos[k][0] - px, dy = ch.pos[k][1] - py;
      double d2 = dx * dx + dy * dy;
      if (d2 < bd) {
        bd = d2;
        bestv = ch.verts[k];
      }
    }
    return bestv;
  };
  std::vector<int> centers;
  auto add_center = [&](int v) {
    if (v >= 0 && std::find(centers.begin(), centers.end(), v) == centers.end()) {
      centers.push_back(v);
      return true;
    }
    return false;
  };
  bool hyp = s.model == Model::Hyperbolic;
  std::vector<std::pair<double, int>> rings;  // (ring radius, point count)
  if (hyp && r > 2.0)
    rings = {{9.0 * r / 8, 21}, {11.0 * r / 8, 21}};
  else
    rings = {{5.0 * r / 4, hyp ? 21 : 5}};
  for (int ri = 0; ri < (int)rings.size(); ++ri) {
    auto [rad, K] = rings[ri];
    for (int k = 0; k < K; ++k) {
      double th = 2 * kPi * k / K + (ri == 1 ? kPi / K : 0.0);
      add_center(snap(cp[0] + rad * ch.scale * std::cos(th),
                      cp[1] + rad * ch.scale * std::sin(th)));
    }
  }

  std::vector<double> mind(annulus.size(), kInf);
  auto add_cover = [&](int v) {
    SteinerGraph::Options oc;
    oc.stop_dist = r + 1e-9;
    auto res = g.run({{g.vertex_node(v), 0.0}}, oc);
    for (size_t k = 0; k < annulus.size(); ++k)
      mind[k] = std::min(mind[k], res.dist[annulus[k]]);
  };
  for (int v : centers) add_cover(v);

  bool covered;
  for (;;) {
    int worst = -1;
    double wd = r;
    for (size_t k = 0; k < annulus.size(); ++k)
      if (mind[k] > wd) {
        wd = mind[k];
        worst = (int)k;
      }
    covered = worst < 0;
    if (covered || (int)centers.size() >= 64) break;
    int n = annulus[worst];
    int v;
    if (g.is_vertex_node(n)) {
      v = n;
    } else {
      auto [e, p] = g.node_edge_param(n);
      v = p <= 0.5 ? s.edges[e].va : s.edges[e].vb;
    }
    if (!add_center(v)) break;  // stalled; report uncovered
    add_cover(v);
  }

  out.centers = centers;
  out.max_gap = 0;
  for (double d : mind) out.max_gap = std::max(out.max_gap, d);
  out.certified = covered && (int)centers.size() <= 42;
  return out;
}

} // namespace sweepcert
