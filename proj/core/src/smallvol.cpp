#include "sweepcert/smallvol.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

#include "sweepcert/distance.hpp"
#include "sweepcert/geometry.hpp"
#include "sweepcert/refine.hpp"

namespace sweepcert {

double small_volume_bound(int k, double delta) {
  if (k < 0) throw std::invalid_argument("small_volume_bound: negative count");
  return 500.0 * std::log(k + 1.0) * delta;
}

namespace {

double plan_units(long long k, int fanout, std::map<long long, double>& memo) {
  if (k <= fanout) return 4.0 + 2.0 * (double)k;
  auto it = memo.find(k);
  if (it != memo.end()) return it->second;
  long long kp = (k + fanout - 1) / fanout;
  long long k1 = (k + 9) / 10 + 1;
  long long k2 = k - kp;
  double r = std::max(plan_units(k1, fanout, memo),
                      plan_units(k2, fanout, memo)) +
             2.0;
  memo[k] = r;
  return r;
}

} // namespace

double small_volume_plan(int k, double delta, int fanout) {
  if (k < 1) throw std::invalid_argument("small_volume_plan: need a ball");
  if (fanout < 2)
    throw std::invalid_argument("small_volume_plan: fanout must be at least 2");
  std::map<long long, double> memo;
  return plan_units(k, fanout, memo) * delta;
}

double small_volume_delta(double area, double eps) {
  if (!(area > 0) || !(eps > 0))
    throw std::invalid_argument("small_volume_delta: need positive area, eps");
  auto envelope = [&](double d) {
    return 500.0 * std::log(12.0 * area / (d * d) + 2.0) * d;
  };
  double hi = std::sqrt(area);
  if (envelope(hi) <= eps) return hi;
  double lo = hi;
  int guard = 0;
  while (envelope(lo) > eps) {
    lo *= 0.5;
    if (++guard > 4000)
      throw std::runtime_error("small_volume_delta: no feasible scale");
  }
  for (int i = 0; i < 100; ++i) {
    double mid = 0.5 * (lo + hi);
    (envelope(mid) <= eps ? lo : hi) = mid;
  }
  return lo;
}

namespace {

struct Packing {
  std::vector<int> centers;
  double cover = 0;
};

// Greedy farthest-point net over the region's vertices: centers end up
// pairwise more than delta/3 apart and every vertex lands within delta/3
// of one, a hair tighter than the half-delta cover the budget needs.
Packing pack_balls(const ConformalSurface& s, const Region& u, double delta,
                   int per_edge) {
  std::vector<int> uverts = u.vertex_set(s);
  if (uverts.empty())
    throw std::invalid_argument("small_volume_sweep: region has no vertices");
  SteinerGraph g(s, per_edge);
  SteinerGraph::Options o;
  o.orig_metric = true;
  o.stop_dist = delta;
  std::vector<double> best(s.nv(), kInf);
  Packing p;
  while (true) {
    int pick = -1;
    double bd = delta / 3.0;
    for (int v : uverts)
      if (best[v] > bd) {
        bd = best[v];
        pick = v;
      }
    if (pick < 0) break;
    p.centers.push_back(pick);
    auto res = g.run({{g.vertex_node(pick), 0.0}}, o);
    for (int v : uverts) best[v] = std::min(best[v], res.dist[g.vertex_node(v)]);
  }
  for (int v : uverts) p.cover = std::max(p.cover, best[v]);
  return p;
}

// Distance from the centers at every vertex, clamped finite. Exact wherever
// it can influence a level at or below delta; farther values only need to
// stay above the scan range, which the stop distance guarantees.
std::vector<double> vertex_field(const ConformalSurface& s,
                                 const std::vector<int>& centers, double stop,
                                 int per_edge) {
  SteinerGraph g(s, per_edge);
  SteinerGraph::Options o;
  o.orig_metric = true;
  o.stop_dist = stop;
  std::vector<std::pair<int, double>> src;
  src.reserve(centers.size());
  for (int c : centers) src.push_back({g.vertex_node(c), 0.0});
  auto res = g.run(src, o);
  std::vector<double> vd(s.nv());
  for (int v = 0; v < s.nv(); ++v)
    vd[v] = std::min(res.dist[g.vertex_node(v)], 2.0 * stop);
  return vd;
}

// A level is usable for cutting only when every crossing stays well inside
// its side: crossings grazing a corner would spawn sliver children whose
// side lengths drown in rounding. margin is the smallest crossing parameter
// distance to a corner over the masked triangles, infinite when nothing
// straddles.
struct LevelProbe {
  double len = 0;
  double margin = kInf;
};

LevelProbe probe_level(const ConformalSurface& s, const std::vector<double>& vd,
                       const std::vector<char>& mask, double t) {
  LevelProbe p;
  for (int ti = 0; ti < s.nt(); ++ti) {
    if (!mask[ti]) continue;
    const Tri& tr = s.tris[ti];
    Vec3 pts[2];
    int np = 0;
    for (int side = 0; side < 3; ++side) {
      double a = vd[tr.v[side]], b = vd[tr.v[(side + 1) % 3]];
      if (a == t || b == t) p.margin = 0;
      if ((a < t) == (b < t)) continue;
      double u = (t - a) / (b - a);
      p.margin = std::min(p.margin, std::min(u, 1.0 - u));
      if (np < 2)
        pts[np++] = point_lerp(s.model, s.placed[ti][side],
                               s.placed[ti][(side + 1) % 3], u);
    }
    if (np == 2)
      p.len += chord_value_integral(
          s.model, s.placed[ti][0], s.placed[ti][1], s.placed[ti][2],
          s.corner_lambda(ti, 0), s.corner_lambda(ti, 1),
          s.corner_lambda(ti, 2), pts[0], pts[1]);
  }
  return p;
}

constexpr double kLevelMargin = 1e-4;

struct Scan {
  double r = 0;
  double len = kInf;
};

Scan scan_levels(const ConformalSurface& s, const std::vector<double>& vd,
                 const std::vector<char>& mask, double lo, double hi, int n) {
  Scan best;
  bool found = false;
  for (int j = 0; j < n; ++j) {
    double r = lo + (j + 0.5) * (hi - lo) / n;
    LevelProbe p = probe_level(s, vd, mask, r);
    if (p.margin < kLevelMargin) continue;
    if (p.len < best.len) {
      best.len = p.len;
      best.r = r;
      found = true;
    }
  }
  if (!found)
    throw std::runtime_error("small_volume_sweep: no generic cut level found");
  return best;
}

struct State {
  ConformalSurface surf;
  std::vector<int> origin; // current tri -> input tri
  Region udom;
  Region cur, swept;
  std::deque<Region> work;
  std::vector<Region> sdom;
  std::vector<int> scen;
  std::vector<BallStage> meta;
};

void absorb_cut(State& st, LevelCut& lc) {
  st.udom = lc.map_region(st.udom);
  st.cur = lc.map_region(st.cur);
  st.swept = lc.map_region(st.swept);
  for (Region& r : st.work) r = lc.map_region(r);
  for (Region& r : st.sdom) r = lc.map_region(r);
  std::vector<int> norig(lc.map.tri_parent.size());
  for (size_t i = 0; i < norig.size(); ++i)
    norig[i] = st.origin[lc.map.tri_parent[i]];
  st.origin = std::move(norig);
  st.surf = std::move(lc.surf);
}

double max_edge_len(const ConformalSurface& s) {
  double m = 0;
  for (const Edge& e : s.edges) m = std::max(m, e.orig_len);
  return m;
}

SweepFunction field_on(const Region& dom, const ConformalSurface& s,
                       const std::vector<double>& vd) {
  SweepFunction f;
  f.domain = dom;
  f.vals.resize(dom.size());
  for (int i = 0; i < dom.size(); ++i) {
    const Tri& tr = s.tris[dom.tris[i]];
    f.vals[i] = {vd[tr.v[0]], vd[tr.v[1]], vd[tr.v[2]]};
  }
  return f;
}

// One concentric sweep stage around `c`: scan for the shortest circle in
// the ball's radius band, realize the cut if the level actually crosses the
// unswept remainder, and mark the captured piece as swept.
void process_center(State& st, int c, double delta,
                    const SmallVolumeOptions& opt) {
  Region rem = st.cur.set_minus(st.swept);
  if (rem.empty()) return;
  double stop = 2.0 * delta + 2.0 * max_edge_len(st.surf);
  std::vector<double> vd = vertex_field(st.surf, {c}, stop, opt.per_edge);
  std::vector<char> mask(st.surf.nt(), 0);
  for (int t : rem.tris) mask[t] = 1;
  Scan sc =
      scan_levels(st.surf, vd, mask, delta / 2.0, delta, opt.level_samples);

  Region stage;
  double cut_len = 0;
  double radius = sc.r;
  if (sc.len == 0) {
    for (int t : rem.tris) {
      const Tri& tr = st.surf.tris[t];
      double m = std::max({vd[tr.v[0]], vd[tr.v[1]], vd[tr.v[2]]});
      if (m < sc.r) stage.tris.push_back(t);
    }
    if (stage.empty()) return;
    stage.normalize();
  } else {
    cut_len = sc.len;
    LevelCut lc = insert_level_cut(st.surf, field_on(rem, st.surf, vd), radius);
    stage = lc.below;
    absorb_cut(st, lc);
    if (stage.empty()) return;
  }
  st.swept = st.swept.set_union(stage);
  st.sdom.push_back(stage);
  st.scen.push_back(c);
  st.meta.push_back(BallStage{c, radius, cut_len, 1.0});
}

void merge_item(State& st, const Packing& pk, double delta,
                const SmallVolumeOptions& opt) {
  st.swept = Region{};
  for (int pass = 0; pass < 3; ++pass) {
    for (int c : pk.centers) {
      if (st.cur.set_minus(st.swept).empty()) return;
      process_center(st, c, delta, opt);
    }
    if (st.cur.set_minus(st.swept).empty()) return;
  }
  throw std::runtime_error("small_volume_sweep: ball merge left uncovered area");
}

// Split an over-full work item along one short level of the distance to a
// small batch of its centers. The inside lands in front of the queue so its
// stages come first.
bool peel_item(State& st, const Packing& pk, double delta,
               const SmallVolumeOptions& opt) {
  int kp = (int)((pk.centers.size() + opt.fanout - 1) / opt.fanout);
  std::vector<int> tube(pk.centers.begin(), pk.centers.begin() + kp);
  double stop = 2.0 * delta + 2.0 * max_edge_len(st.surf);
  std::vector<double> vd = vertex_field(st.surf, tube, stop, opt.per_edge);
  std::vector<char> mask(st.surf.nt(), 0);
  for (int t : st.cur.tris) mask[t] = 1;
  double lo = 0.5 * delta * (1.0 + 1e-6);
  Scan sc = scan_levels(st.surf, vd, mask, lo, delta, opt.level_samples);

  Region u1, u2;
  if (sc.len == 0) {
    for (int t : st.cur.tris) {
      const Tri& tr = st.surf.tris[t];
      double m = std::max({vd[tr.v[0]], vd[tr.v[1]], vd[tr.v[2]]});
      (m < sc.r ? u1 : u2).tris.push_back(t);
    }
    u1.normalize();
    u2.normalize();
  } else {
    LevelCut lc =
        insert_level_cut(st.surf, field_on(st.cur, st.surf, vd), sc.r);
    u1 = lc.below;
    u2 = lc.above;
    absorb_cut(st, lc);
  }
  if (u1.empty() || u2.empty()) return false;
  st.work.push_front(u2);
  st.work.push_front(u1);
  return true;
}

} // namespace

Region SmallVolumeSweep::map_region(const Region& input) const {
  std::set<int> want(input.tris.begin(), input.tris.end());
  Region r;
  for (int t = 0; t < (int)tri_origin.size(); ++t)
    if (want.count(tri_origin[t])) r.tris.push_back(t);
  r.normalize();
  return r;
}

SmallVolumeSweep small_volume_sweep_delta(const ConformalSurface& s,
                                          const Region& u, double delta,
                                          const SmallVolumeOptions& opt) {
  if (!(delta > 0))
    throw std::invalid_argument("small_volume_sweep: delta must be positive");
  if (opt.fanout < 2 || opt.level_samples < 8 || opt.per_edge < 1 ||
      opt.max_depth < 1)
    throw std::invalid_argument("small_volume_sweep: bad options");
  if (u.empty())
    throw std::invalid_argument("small_volume_sweep: empty region");
  double area = u.orig_area(s);
  if (!(area < delta * delta))
    throw std::invalid_argument(
        "small_volume_sweep: region area must stay under delta^2");

  State st;
  st.surf = s;
  st.origin.resize(s.nt());
  std::iota(st.origin.begin(), st.origin.end(), 0);
  st.udom = u;
  st.udom.normalize();
  st.work.push_back(st.udom);

  SmallVolumeSweep out;
  out.delta = delta;
  int peels = 0;
  bool first = true;
  int items = 0;
  while (!st.work.empty()) {
    if (++items > (1 << 20))
      throw std::runtime_error("small_volume_sweep: runaway work queue");
    st.cur = st.work.front();
    st.work.pop_front();
    if (st.cur.empty()) continue;
    Packing pk = pack_balls(st.surf, st.cur, delta, opt.per_edge);
    if (first) {
      out.ball_count = (int)pk.centers.size();
      out.cover_radius = pk.cover;
      first = false;
    }
    if ((int)pk.centers.size() > opt.fanout) {
      if (peels >= opt.max_depth)
        throw std::runtime_error("small_volume_sweep: split recursion too deep");
      if (peel_item(st, pk, delta, opt)) {
        out.tube_cuts = ++peels;
        continue;
      }
    }
    merge_item(st, pk, delta, opt);
  }
  if (st.sdom.empty())
    throw std::runtime_error("small_volume_sweep: no stages produced");

  std::vector<SweepFunction> fs;
  fs.reserve(st.sdom.size());
  for (size_t i = 0; i < st.sdom.size(); ++i) {
    std::vector<int> dvs = st.sdom[i].vertex_set(st.surf);
    int ce = st.scen[i];
    if (!std::binary_search(dvs.begin(), dvs.end(), ce)) ce = dvs.front();
    Chart ch = chart_around(st.surf, st.sdom[i], ce);
    st.meta[i].chart_lip = ch.lip;
    out.lip = std::max(out.lip, ch.lip);
    SweepFunction g;
    g.domain = st.sdom[i];
    g.vals.resize(g.domain.size());
    for (int j = 0; j < g.domain.size(); ++j) {
      const Tri& tr = st.surf.tris[g.domain.tris[j]];
      for (int c = 0; c < 3; ++c)
        g.vals[j][c] = ch.vertex_pos(tr.v[c])[0];
    }
    fs.push_back(std::move(g));
  }
  out.f = concat_many(st.surf, fs);
  WidthProfile prof = width_profile(st.surf, out.f);
  out.width_bound = prof.sup_rel_bound();
  for (const WidthInterval& iv : prof.intervals)
    out.width_measured =
        std::max(out.width_measured, iv.free_mid + iv.gamma_mid);
  out.bound = small_volume_bound(out.ball_count, delta);
  out.stages = std::move(st.meta);
  out.domain = st.udom;
  out.tri_origin = std::move(st.origin);
  out.surf = std::move(st.surf);
  return out;
}

SmallVolumeSweep small_volume_sweep(const ConformalSurface& s, const Region& u,
                                    double eps, const SmallVolumeOptions& opt) {
  double delta = small_volume_delta(s.total_orig_area, eps);
  return small_volume_sweep_delta(s, u, delta, opt);
}

} // namespace sweepcert
