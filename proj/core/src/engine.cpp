#include "sweepcert/engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <numeric>
#include <set>
#include <stdexcept>

#include "sweepcert/chart.hpp"
#include "sweepcert/distance.hpp"
#include "sweepcert/geometry.hpp"

namespace sweepcert {

// ── certificates ────────────────────────────────────────────────────────────

bool CertEntry::all_pass() const {
  if (!pass) return false;
  for (const CertEntry& c : children)
    if (!c.all_pass()) return false;
  return true;
}

namespace {

std::string fmt_g(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", x);
  return buf;
}

void render_cert(const CertEntry& e, int depth, std::string& out) {
  out.append(2 * depth, ' ');
  out += e.op;
  out += ": measured ";
  out += fmt_g(e.measured);
  out += " <= ";
  out += fmt_g(e.bound);
  out += e.pass ? " PASS" : " FAIL";
  if (!e.detail.empty()) {
    out += "  [";
    out += e.detail;
    out += "]";
  }
  out += "\n";
  for (const CertEntry& c : e.children) render_cert(c, depth + 1, out);
}

} // namespace

std::string CertEntry::to_text() const {
  std::string out;
  render_cert(*this, 0, out);
  return out;
}

namespace {

CertEntry make_entry(std::string op, double measured, double bound, double tol,
                     std::string detail = "") {
  CertEntry e;
  e.op = std::move(op);
  e.measured = measured;
  e.bound = bound;
  e.tol = tol;
  e.pass = std::isfinite(measured) && measured <= bound;
  e.detail = std::move(detail);
  return e;
}

// ── shared cut machinery ────────────────────────────────────────────────────

constexpr double kLevelMargin = 1e-4;

double max_model_edge(const ConformalSurface& s) {
  double m = 0;
  for (const Edge& e : s.edges) m = std::max(m, e.model_len);
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

// Model-metric distance from the region U, restricted to paths inside V.
// Values beyond the stop horizon are clamped to a finite ceiling that no
// level below `reach` can see.
std::vector<double> region_field(const ConformalSurface& s, const Region& u,
                                 const Region& v, double reach, int per_edge) {
  SteinerGraph g(s, per_edge);
  std::vector<std::uint8_t> mask(s.nt(), 0);
  for (int t : v.tris) mask[t] = 1;
  std::vector<char> edge_in(s.ne(), 0);
  std::vector<std::pair<int, double>> src;
  for (int v0 : u.vertex_set(s)) src.push_back({g.vertex_node(v0), 0.0});
  for (int t : u.tris)
    for (int side = 0; side < 3; ++side) edge_in[s.tris[t].edge[side]] = 1;
  for (int e = 0; e < s.ne(); ++e)
    if (edge_in[e])
      for (int i = 0; i < per_edge; ++i) src.push_back({g.edge_node(e, i), 0.0});
  SteinerGraph::Options o;
  o.orig_metric = false;
  o.stop_dist = reach + 3.0 * max_model_edge(s);
  o.tri_mask = &mask;
  auto res = g.run(src, o);
  std::vector<double> vd(s.nv());
  for (int v0 = 0; v0 < s.nv(); ++v0)
    vd[v0] = std::min(res.dist[g.vertex_node(v0)], 2.0 * o.stop_dist);
  return vd;
}

struct LevelProbe {
  double len = 0;
  double margin = kInf;
};

LevelProbe probe_level(const ConformalSurface& s, const std::vector<double>& vd,
                       const std::vector<int>& band, double t) {
  LevelProbe p;
  for (int ti : band) {
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

struct Pick {
  double level = 0;
  double len = kInf;
  bool found = false;
};

// Shortest generic level over (lo, hi): midpoint scan, then golden-section
// refinement of the best sample's window. Margin-failing probes stay out of
// the running.
Pick pick_level(const ConformalSurface& s, const std::vector<double>& vd,
                const std::vector<int>& band, double lo, double hi,
                const EngineOptions& opt) {
  Pick best;
  auto probe = [&](double t) {
    LevelProbe p = probe_level(s, vd, band, t);
    if (p.margin < kLevelMargin) return kInf;
    if (p.len < best.len) {
      best.len = p.len;
      best.level = t;
      best.found = true;
    }
    return p.len;
  };
  int n = std::max(8, opt.level_samples);
  for (int j = 0; j < n; ++j) probe(lo + (j + 0.5) * (hi - lo) / n);
  if (!best.found) return best;
  double h = (hi - lo) / n;
  double a = std::max(lo, best.level - h), b = std::min(hi, best.level + h);
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = probe(x1), f2 = probe(x2);
  for (int i = 0; i < opt.golden_iters; ++i) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = probe(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = probe(x2);
    }
  }
  return best;
}

struct CutPlan {
  Region rest;  // V minus U, the sweep domain of the cut
  Region band;  // annulus A: rest triangles reached under r
  double mu0_a = 0, mu_a = 0;
  std::vector<double> vd;
  Pick pick;
};

CutPlan plan_cut(const ConformalSurface& s, const Region& u, const Region& v,
                 double r, const EngineOptions& opt) {
  if (!(r > 0)) throw std::invalid_argument("coarea_cut: radius must be positive");
  if (u.empty()) throw std::invalid_argument("coarea_cut: empty source region");
  if (!std::includes(v.tris.begin(), v.tris.end(), u.tris.begin(), u.tris.end()))
    throw std::invalid_argument("coarea_cut: source must lie inside the host");
  CutPlan plan;
  plan.rest = v.set_minus(u);
  if (plan.rest.empty()) {
    plan.pick.found = true;
    plan.pick.level = r / 2;
    plan.pick.len = 0;
    return plan;
  }
  plan.vd = region_field(s, u, v, r, opt.per_edge);
  for (int t : plan.rest.tris) {
    const Tri& tr = s.tris[t];
    double m = std::min({plan.vd[tr.v[0]], plan.vd[tr.v[1]], plan.vd[tr.v[2]]});
    if (m < r) plan.band.tris.push_back(t);
  }
  plan.band.normalize();
  plan.mu0_a = plan.band.model_area(s);
  plan.mu_a = plan.band.orig_area(s);
  if (plan.band.empty()) {
    plan.pick.found = true;
    plan.pick.level = r / 2;
    plan.pick.len = 0;
    return plan;
  }
  plan.pick = pick_level(s, plan.vd, plan.band.tris, 0.0, r, opt);
  if (!plan.pick.found)
    throw std::runtime_error("coarea_cut: no generic cut level found");
  return plan;
}

struct CutExec {
  ConformalSurface surf;  // meaningful only when did_cut
  RefineMap map;
  Region grown;
  std::vector<int> cut_edges;
  double cut_len = 0;
  bool did_cut = false;
};

CutExec execute_cut(const ConformalSurface& s, const Region& u,
                    const CutPlan& plan) {
  CutExec ex;
  if (plan.pick.len > 0) {
    LevelCut lc =
        insert_level_cut(s, field_on(plan.rest, s, plan.vd), plan.pick.level);
    ex.grown = lc.map_region(u).set_union(lc.below);
    ex.cut_edges = lc.cut_edges;
    for (int e : ex.cut_edges) ex.cut_len += lc.surf.edges[e].orig_len;
    ex.map = std::move(lc.map);
    ex.surf = std::move(lc.surf);
    ex.did_cut = true;
    return ex;
  }
  ex.grown = u;
  for (int t : plan.rest.tris) {
    const Tri& tr = s.tris[t];
    double m = std::max({plan.vd[tr.v[0]], plan.vd[tr.v[1]], plan.vd[tr.v[2]]});
    if (m < plan.pick.level) ex.grown.tris.push_back(t);
  }
  ex.grown.normalize();
  return ex;
}

RefineMap identity_map(const ConformalSurface& s) {
  RefineMap m;
  m.old_vertex_count = s.nv();
  m.tri_parent.resize(s.nt());
  std::iota(m.tri_parent.begin(), m.tri_parent.end(), 0);
  m.tri_children.resize(s.nt());
  for (int t = 0; t < s.nt(); ++t) m.tri_children[t] = {t};
  m.edge_pieces.resize(s.ne());
  for (int e = 0; e < s.ne(); ++e) m.edge_pieces[e] = {e};
  return m;
}

// ── ball capture ────────────────────────────────────────────────────────────

// Largest-area component, ties to the one holding the lowest triangle id.
Region largest_component(const ConformalSurface& s,
                         const std::vector<Region>& comps) {
  int pick = 0;
  double best = -1;
  for (size_t i = 0; i < comps.size(); ++i) {
    double a = comps[i].orig_area(s);
    if (a > best) {
      best = a;
      pick = (int)i;
    }
  }
  return comps[pick];
}

std::vector<int> strided_pool(const std::vector<int>& verts, int budget) {
  int stride = std::max(1, (int)verts.size() / std::max(1, budget));
  std::vector<int> pool;
  for (size_t i = 0; i < verts.size(); i += stride) pool.push_back(verts[i]);
  return pool;
}

struct Capture {
  int center = -1;
  double radius = 0;
  Region ball;
  double captured = 0;  // original area of the ball inside U
  int pool = 0;
};

// Smallest model-metric vertex ball around a candidate pool center whose
// corner-dual original area inside U reaches the target. Later candidates
// run with the incumbent radius as a stop horizon.
Capture capture_ball(const ConformalSurface& s, const Region& u, double target,
                     const std::vector<int>& candidates,
                     const EngineOptions& opt) {
  if (candidates.empty())
    throw std::invalid_argument("capture_ball: empty candidate pool");
  std::vector<double> dual(s.nv(), 0.0);
  double total = 0;
  for (int t : u.tris) {
    double share = s.tri_orig_area[t] / 3.0;
    for (int c = 0; c < 3; ++c) dual[s.tris[t].v[c]] += share;
    total += s.tri_orig_area[t];
  }
  if (!(target > 0) || target > total)
    throw std::invalid_argument("capture_ball: bad capture target");

  std::vector<int> uverts = u.vertex_set(s);
  SteinerGraph g(s, opt.per_edge);
  std::vector<std::uint8_t> mask(s.nt(), 0);
  for (int t : u.tris) mask[t] = 1;
  Capture best;
  best.radius = kInf;
  best.pool = (int)candidates.size();
  std::vector<std::pair<double, int>> order;
  for (int cand : candidates) {
    SteinerGraph::Options o;
    o.orig_metric = false;
    o.tri_mask = &mask;
    if (best.center >= 0) o.stop_dist = best.radius;
    auto res = g.run({{g.vertex_node(cand), 0.0}}, o);
    order.clear();
    for (int v : uverts) {
      double d = res.dist[g.vertex_node(v)];
      if (std::isfinite(d)) order.push_back({d, v});
    }
    std::sort(order.begin(), order.end());
    double acc = 0, rx = kInf;
    for (const auto& [d, v] : order) {
      acc += dual[v];
      if (acc >= target - 1e-12 * total) {
        rx = d;
        break;
      }
    }
    if (rx < best.radius) {
      best.radius = rx;
      best.center = cand;
    }
  }
  if (best.center < 0)
    throw std::runtime_error("capture_ball: no candidate reached the target");

  double rmin = kInf;
  for (const Edge& e : s.edges)
    if (e.va == best.center || e.vb == best.center)
      rmin = std::min(rmin, e.model_len);
  best.radius = std::max(best.radius, 0.5 * rmin);

  SteinerGraph::Options o;
  o.orig_metric = false;
  o.tri_mask = &mask;
  o.stop_dist = best.radius + 2.0 * max_model_edge(s);
  auto res = g.run({{g.vertex_node(best.center), 0.0}}, o);
  std::vector<double> vd = g.vertex_distances(res);
  for (int t : u.tris) {
    const Tri& tr = s.tris[t];
    double m = std::min({vd[tr.v[0]], vd[tr.v[1]], vd[tr.v[2]]});
    if (m <= best.radius) {
      best.ball.tris.push_back(t);
      best.captured += s.tri_orig_area[t];
    }
  }
  best.ball.normalize();
  if (best.ball.empty()) throw std::runtime_error("capture_ball: empty ball");
  return best;
}

// Candidate pool for capturing inside U: strided vertices of the largest
// component, which is the only place a connected ball can reach the target.
std::vector<int> capture_pool(const ConformalSurface& s, const Region& comp,
                              const EngineOptions& opt) {
  return strided_pool(comp.vertex_set(s), opt.center_budget);
}

} // namespace

// ── coarea cut ──────────────────────────────────────────────────────────────

CoareaCut coarea_cut(const ConformalSurface& s, const Region& u,
                     const Region& v, double r, const EngineOptions& opt) {
  CutPlan plan = plan_cut(s, u, v, r, opt);
  CutExec ex = execute_cut(s, u, plan);
  CoareaCut out;
  if (ex.did_cut) {
    out.surf = std::move(ex.surf);
    out.map = std::move(ex.map);
  } else {
    out.surf = s;
    out.map = identity_map(s);
  }
  out.grown = std::move(ex.grown);
  out.cut_edges = std::move(ex.cut_edges);
  out.cut_len = ex.cut_len;
  out.level = plan.pick.level;
  out.mu0_annulus = plan.mu0_a;
  out.mu_annulus = plan.mu_a;
  double bound = std::sqrt(plan.mu0_a * plan.mu_a) / r * (1.0 + opt.tol);
  out.cert = make_entry("coarea_cut", out.cut_len, bound, opt.tol,
                        "r=" + fmt_g(r) + " level=" + fmt_g(out.level) +
                            " mu0_a=" + fmt_g(plan.mu0_a) +
                            " mu_a=" + fmt_g(plan.mu_a));
  return out;
}

// ── balanced cut ────────────────────────────────────────────────────────────

namespace {

// Zero-cut split of a disconnected region whose components all miss the
// capture target: components go to the lighter side, largest first.
std::pair<Region, Region> pack_components(const ConformalSurface& s,
                                          std::vector<Region> comps) {
  std::vector<std::pair<double, int>> order;
  for (size_t i = 0; i < comps.size(); ++i)
    order.push_back({-comps[i].orig_area(s), (int)i});
  std::sort(order.begin(), order.end(),
            [&](const auto& a, const auto& b) {
              if (a.first != b.first) return a.first < b.first;
              return comps[a.second].tris[0] < comps[b.second].tris[0];
            });
  Region g1, g2;
  double a1 = 0, a2 = 0;
  for (const auto& [na, i] : order) {
    if (a1 <= a2) {
      g1 = g1.set_union(comps[i]);
      a1 += -na;
    } else {
      g2 = g2.set_union(comps[i]);
      a2 += -na;
    }
  }
  return {g1, g2};
}

} // namespace

BalancedCut balanced_cut(const ConformalSurface& s, const Region& u,
                         int tile_cover, const EngineOptions& opt) {
  if (u.empty()) throw std::invalid_argument("balanced_cut: empty region");
  if (tile_cover < 1 || tile_cover > 40)
    throw std::invalid_argument("balanced_cut: tile cover must be in [1, 40]");
  double mu = u.orig_area(s);
  double target = mu / 44.0;
  std::vector<Region> comps = u.components(s);
  Region big = largest_component(s, comps);

  BalancedCut out;
  if (comps.size() > 1 && big.orig_area(s) < target) {
    auto [g1, g2] = pack_components(s, std::move(comps));
    out.surf = s;
    out.map = identity_map(s);
    out.part1 = std::move(g1);
    out.part2 = std::move(g2);
  } else {
    Capture cap = capture_ball(s, u, target, capture_pool(s, big, opt), opt);
    CutPlan plan = plan_cut(s, cap.ball, u, cap.radius / 2.0, opt);
    CutExec ex = execute_cut(s, cap.ball, plan);
    Region udom;
    if (ex.did_cut) {
      udom = ex.map.map_region(u);
      out.surf = std::move(ex.surf);
      out.map = std::move(ex.map);
    } else {
      udom = u;
      out.surf = s;
      out.map = identity_map(s);
    }
    out.part1 = std::move(ex.grown);
    out.part2 = udom.set_minus(out.part1);
    out.cut_edges = std::move(ex.cut_edges);
    out.cut_len = ex.cut_len;
    out.center = cap.center;
    out.radius = cap.radius;
  }
  if (out.part1.empty() || out.part2.empty())
    throw std::runtime_error("balanced_cut: degenerate split");

  double m1 = out.part1.orig_area(out.surf);
  double m2 = out.part2.orig_area(out.surf);
  out.cert = make_entry("balanced_cut", out.cut_len,
                        5.58 * std::sqrt(mu) * (1.0 + opt.tol), opt.tol,
                        "center=" + std::to_string(out.center) +
                            " radius=" + fmt_g(out.radius));
  out.cert.children.push_back(make_entry("balanced_parts", std::max(m1, m2),
                                         43.0 / 44.0 * mu, 0.0,
                                         "mu1=" + fmt_g(m1) +
                                             " mu2=" + fmt_g(m2)));
  out.cert.pass = out.cert.pass && out.cert.children.back().pass;
  return out;
}

// ── surface evolution ───────────────────────────────────────────────────────

namespace {

struct Evolver {
  ConformalSurface surf;
  std::vector<int> origin;
  std::deque<Region> store;

  explicit Evolver(const ConformalSurface& s) : surf(s) {
    origin.resize(s.nt());
    std::iota(origin.begin(), origin.end(), 0);
  }

  Region* add(Region r) {
    r.normalize();
    store.push_back(std::move(r));
    return &store.back();
  }

  void absorb(CutExec& ex) {
    if (!ex.did_cut) return;
    for (Region& r : store) r = ex.map.map_region(r);
    std::vector<int> norig(ex.map.tri_parent.size());
    for (size_t i = 0; i < norig.size(); ++i)
      norig[i] = origin[ex.map.tri_parent[i]];
    origin = std::move(norig);
    surf = std::move(ex.surf);
  }
};

struct StepCut {
  Region grown;  // on the evolver's current surface
  double cut_len = 0;
  double level = 0;
  double mu0_a = 0, mu_a = 0;
};

// One coarea cut inside the evolver: u and v are snapshots taken before the
// cut; every stored region is remapped in place.
StepCut coarea_step(Evolver& ev, Region u, Region v, double r,
                    const EngineOptions& opt) {
  CutPlan plan = plan_cut(ev.surf, u, v, r, opt);
  CutExec ex = execute_cut(ev.surf, u, plan);
  StepCut st;
  st.cut_len = ex.cut_len;
  st.level = plan.pick.level;
  st.mu0_a = plan.mu0_a;
  st.mu_a = plan.mu_a;
  st.grown = ex.grown;
  ev.absorb(ex);
  return st;
}

// ── bisection forest ────────────────────────────────────────────────────────
//
// All cuts for every requested region happen first; the sweep functions are
// only built once the mesh stops changing, so no stage ever needs its values
// remapped through a later refinement.

struct ForestOut {
  ConformalSurface surf;
  std::vector<int> origin;
  std::vector<Region> domains;  // input regions on the final surface
  std::vector<std::vector<SweepFunction>> stages;
  std::vector<std::vector<CertEntry>> node_certs;  // bisections then leaves
  std::vector<int> leaf_count;
  std::vector<int> depth;
};

ForestOut run_forest(const ConformalSurface& s,
                     const std::vector<Region>& regions, double delta_env,
                     const EngineOptions& opt) {
  Evolver ev(s);
  std::vector<Region*> roots;
  for (const Region& r : regions) roots.push_back(ev.add(r));

  struct Leaf {
    Region* dom;
    int region, depth;
  };
  std::vector<Leaf> leaves;
  ForestOut out;
  out.node_certs.resize(regions.size());
  out.leaf_count.assign(regions.size(), 0);
  out.depth.assign(regions.size(), 0);

  for (size_t j = 0; j < regions.size(); ++j) {
    if (roots[j]->empty())
      throw std::invalid_argument("small_covering_sweep: empty region");
    double mu_root = roots[j]->orig_area(ev.surf);
    double leafcap = std::max(delta_env * delta_env,
                              mu_root / std::max(1, opt.leaf_splits));
    std::vector<std::pair<Region*, int>> stack{{roots[j], 0}};
    int guard = 0;
    while (!stack.empty()) {
      if (++guard > (1 << 20))
        throw std::runtime_error("small_covering_sweep: runaway recursion");
      auto [node, d] = stack.back();
      stack.pop_back();
      if (node->empty()) continue;
      double mu = node->orig_area(ev.surf);
      if (mu <= leafcap || node->size() <= opt.min_leaf_tris ||
          d >= opt.max_depth) {
        leaves.push_back({node, (int)j, d});
        out.leaf_count[j]++;
        out.depth[j] = std::max(out.depth[j], d);
        continue;
      }
      std::vector<Region> comps = node->components(ev.surf);
      if (comps.size() > 1) {
        for (size_t ci = comps.size(); ci-- > 0;)
          stack.push_back({ev.add(std::move(comps[ci])), d});
        out.node_certs[j].push_back(make_entry(
            "component_split", 0.0, 0.0, 0.0,
            "depth=" + std::to_string(d) +
                " parts=" + std::to_string((int)comps.size())));
        continue;
      }
      Capture cap = capture_ball(ev.surf, *node, mu / 44.0,
                                 capture_pool(ev.surf, *node, opt), opt);
      StepCut st = coarea_step(ev, cap.ball, *node, cap.radius / 2.0, opt);
      Region* part1 = ev.add(st.grown);
      Region* part2 = ev.add(node->set_minus(*part1));
      if (part1->empty() || part2->empty())
        throw std::runtime_error("small_covering_sweep: degenerate bisection");
      double m1 = part1->orig_area(ev.surf);
      double m2 = part2->orig_area(ev.surf);
      CertEntry e = make_entry(
          "bisection_cut", st.cut_len, 5.58 * std::sqrt(mu) * (1.0 + opt.tol),
          opt.tol, "depth=" + std::to_string(d) + " mu=" + fmt_g(mu));
      e.children.push_back(make_entry("balanced_parts", std::max(m1, m2),
                                      43.0 / 44.0 * mu, 0.0,
                                      "mu1=" + fmt_g(m1) + " mu2=" + fmt_g(m2)));
      e.pass = e.pass && e.children.back().pass;
      out.node_certs[j].push_back(std::move(e));
      stack.push_back({part2, d + 1});
      stack.push_back({part1, d + 1});
    }
  }

  out.stages.resize(regions.size());
  for (const Leaf& lf : leaves) {
    std::vector<int> dvs = lf.dom->vertex_set(ev.surf);
    Chart ch = chart_around(ev.surf, *lf.dom, dvs.front());
    SweepFunction g;
    g.domain = *lf.dom;
    g.vals.resize(g.domain.size());
    for (int i = 0; i < g.domain.size(); ++i) {
      const Tri& tr = ev.surf.tris[g.domain.tris[i]];
      for (int c = 0; c < 3; ++c) g.vals[i][c] = ch.vertex_pos(tr.v[c])[0];
    }
    double mu = lf.dom->orig_area(ev.surf);
    WidthProfile prof = width_profile(ev.surf, g);
    out.node_certs[lf.region].push_back(make_entry(
        "leaf_sweep", prof.sup_free_bound(),
        489.0 * std::sqrt(mu) * (1.0 + opt.tol), opt.tol,
        "depth=" + std::to_string(lf.depth) + " mu=" + fmt_g(mu) +
            " tris=" + std::to_string(lf.dom->size()) +
            " lip=" + fmt_g(ch.lip)));
    out.stages[lf.region].push_back(std::move(g));
  }
  for (size_t j = 0; j < regions.size(); ++j) out.domains.push_back(*roots[j]);
  out.origin = std::move(ev.origin);
  out.surf = std::move(ev.surf);
  return out;
}

double measured_free(const WidthProfile& prof) {
  double m = 0;
  for (const WidthInterval& iv : prof.intervals) m = std::max(m, iv.free_mid);
  return m;
}

CertEntry recursion_inequality(double mu, double eps) {
  double lhs = 489.0 * std::sqrt(43.0 / 44.0 * mu) + 5.58 * std::sqrt(mu) + eps;
  return make_entry("recursion_inequality", lhs, 489.0 * std::sqrt(mu), 0.0,
                    "eps=" + fmt_g(eps));
}

} // namespace

// ── covering sweep ──────────────────────────────────────────────────────────

Region CoveringSweep::map_region(const Region& input) const {
  std::set<int> want(input.tris.begin(), input.tris.end());
  Region r;
  for (int t = 0; t < (int)tri_origin.size(); ++t)
    if (want.count(tri_origin[t])) r.tris.push_back(t);
  r.normalize();
  return r;
}

CoveringSweep small_covering_sweep(const ConformalSurface& s, const Region& u,
                                   const Tessellation& tess,
                                   const std::vector<int>& tiles, double eps,
                                   const EngineOptions& opt) {
  if (!tess.certified)
    throw std::invalid_argument(
        "small_covering_sweep: tessellation not certified");
  if (u.empty())
    throw std::invalid_argument("small_covering_sweep: empty region");
  if (tiles.empty() || (int)tiles.size() > 40)
    throw std::invalid_argument("small_covering_sweep: need 1 to 40 tiles");
  std::vector<char> covered(s.nt(), 0);
  for (int ti : tiles) {
    if (ti < 0 || ti >= (int)tess.tiles.size())
      throw std::invalid_argument("small_covering_sweep: bad tile index");
    for (int t : tess.tiles[ti].region.tris) covered[t] = 1;
  }
  for (int t : u.tris)
    if (!covered[t])
      throw std::invalid_argument(
          "small_covering_sweep: tiles do not cover the region");

  double mu = u.orig_area(s);
  if (!(eps > 0)) eps = 0.001 * std::sqrt(mu);
  double delta_env = small_volume_delta(s.total_orig_area, eps);

  CoveringSweep out;
  out.delta = delta_env;
  double bound489 = 489.0 * std::sqrt(mu) * (1.0 + opt.tol);

  if (mu < delta_env * delta_env) {
    SmallVolumeSweep sv = small_volume_sweep_delta(s, u, delta_env, opt.smallvol);
    out.surf = std::move(sv.surf);
    out.tri_origin = std::move(sv.tri_origin);
    out.domain = std::move(sv.domain);
    out.f = std::move(sv.f);
    out.f.gamma_edges.clear();
    out.leaf_count = 1;
    WidthProfile prof = width_profile(out.surf, out.f);
    out.width_bound = prof.sup_free_bound();
    out.width_measured = measured_free(prof);
    out.cert = make_entry("small_covering_sweep", out.width_bound, bound489,
                          opt.tol, "mu=" + fmt_g(mu) + " base_case=1");
    out.cert.children.push_back(make_entry(
        "small_volume_budget", out.width_bound, sv.bound, 0.0,
        "balls=" + std::to_string(sv.ball_count) + " delta=" + fmt_g(sv.delta)));
    out.cert.children.push_back(
        make_entry("eps_budget", out.width_bound, eps, 0.0));
    for (const CertEntry& c : out.cert.children)
      out.cert.pass = out.cert.pass && c.pass;
    return out;
  }

  ForestOut fo = run_forest(s, {u}, delta_env, opt);
  out.surf = std::move(fo.surf);
  out.tri_origin = std::move(fo.origin);
  out.domain = std::move(fo.domains[0]);
  out.leaf_count = fo.leaf_count[0];
  out.depth = fo.depth[0];
  out.f = concat_many(out.surf, fo.stages[0]);
  out.f.gamma_edges.clear();
  SweepCheck chk = verify_monotone(out.surf, out.f);
  if (!chk.ok)
    throw std::runtime_error("small_covering_sweep: invalid sweep: " +
                             chk.issue);
  WidthProfile prof = width_profile(out.surf, out.f);
  out.width_bound = prof.sup_free_bound();
  out.width_measured = measured_free(prof);
  out.cert =
      make_entry("small_covering_sweep", out.width_bound, bound489, opt.tol,
                 "mu=" + fmt_g(mu) + " leaves=" + std::to_string(out.leaf_count) +
                     " depth=" + std::to_string(out.depth) +
                     " delta_env=" + fmt_g(delta_env));
  out.cert.children = std::move(fo.node_certs[0]);
  out.cert.children.push_back(recursion_inequality(mu, eps));
  for (const CertEntry& c : out.cert.children)
    out.cert.pass = out.cert.pass && c.all_pass();
  return out;
}

// ── nice covering ───────────────────────────────────────────────────────────

Covering nice_covering(const ConformalSurface& s, const Region& u,
                       const Tessellation& tess, int k,
                       const EngineOptions& opt) {
  if (!tess.certified)
    throw std::invalid_argument("nice_covering: tessellation not certified");
  if (u.empty()) throw std::invalid_argument("nice_covering: empty region");
  if (k < 1) throw std::invalid_argument("nice_covering: k must be positive");
  std::vector<char> covered(s.nt(), 0);
  for (const Tile& t : tess.tiles)
    for (int tri : t.region.tris) covered[tri] = 1;
  for (int t : u.tris)
    if (!covered[t])
      throw std::invalid_argument("nice_covering: tiles do not cover the region");

  double mu_u = u.orig_area(s);
  Covering out;
  out.k = k;
  out.mu_total = mu_u;

  // Trivial covering: with k = 1, one part inside one tile satisfies every
  // bound with zero frontier.
  if (k == 1) {
    for (size_t ti = 0; ti < tess.tiles.size(); ++ti) {
      const Region& tr = tess.tiles[ti].region;
      if (std::includes(tr.tris.begin(), tr.tris.end(), u.tris.begin(),
                        u.tris.end())) {
        out.surf = s;
        out.tri_origin.resize(s.nt());
        std::iota(out.tri_origin.begin(), out.tri_origin.end(), 0);
        out.regions = {u};
        out.region_tiles = {{(int)ti}};
        out.tile_cover = {1};
        out.mu = {mu_u};
        for (const Tile& t : tess.tiles) out.tiles.push_back(t.region);
        out.m = 1;
        out.n_split = 1;
        out.cert = make_entry("nice_covering", 0.0, 0.0, opt.tol,
                              "trivial=1 m=1 n=1");
        out.cert.children.push_back(
            make_entry("region_area", mu_u, mu_u, 0.0, "regions=1"));
        return out;
      }
    }
  }

  Evolver ev(s);
  Region* remaining = ev.add(u);
  std::vector<Region*> live_tiles;
  for (const Tile& t : tess.tiles) live_tiles.push_back(ev.add(t.region));

  CertEntry root = make_entry("nice_covering", 0.0, 0.0, opt.tol, "");
  root.pass = true;

  // Step one: repeatedly grow the tile piece with the largest remaining
  // intersection inside its half-neighborhood and remove it.
  std::vector<Region*> vs;
  double grow_total = 0;
  int guard = 0;
  while (true) {
    if (++guard > (int)tess.tiles.size() + 1)
      throw std::runtime_error("nice_covering: step one failed to terminate");
    int pick = -1;
    double best = 0;
    for (size_t ti = 0; ti < live_tiles.size(); ++ti) {
      Region core = live_tiles[ti]->set_intersect(*remaining);
      if (core.empty()) continue;
      double a = core.orig_area(ev.surf);
      if (a > best) {
        best = a;
        pick = (int)ti;
      }
    }
    if (pick < 0) break;
    Region core = live_tiles[pick]->set_intersect(*remaining);
    StepCut st = coarea_step(ev, core, *remaining, 0.5, opt);
    Region* vi = ev.add(st.grown);
    *remaining = remaining->set_minus(*vi);
    double mu_vi = vi->orig_area(ev.surf);
    root.children.push_back(make_entry(
        "cover_grow", st.cut_len, 58.0 * std::sqrt(mu_vi) * (1.0 + opt.tol),
        opt.tol, "tile=" + std::to_string(pick) + " mu=" + fmt_g(mu_vi)));
    grow_total += st.cut_len;
    vs.push_back(vi);
  }
  if (!remaining->empty())
    throw std::runtime_error("nice_covering: step one left uncovered area");
  int m = (int)vs.size();
  out.m = m;
  root.children.push_back(make_entry(
      "cover_grow_total", grow_total,
      58.0 * std::sqrt((double)m) * std::sqrt(mu_u) * (1.0 + opt.tol), opt.tol,
      "m=" + std::to_string(m)));

  // Step two: split each step-one piece into parts of area at most
  // 43 mu(U)/N by peeling capture balls; disconnected remainders fall apart
  // into components, and small components pack first-fit into shared parts.
  long long n_split = std::max((long long)m, 43LL * k);
  out.n_split = (int)n_split;
  double target = mu_u / (double)n_split;
  double piece_cap = 43.0 * target;
  std::vector<Region*> pieces;
  for (int vi = 0; vi < m; ++vi) {
    std::deque<Region*> queue{vs[vi]};
    Region* bin = nullptr;
    double bin_area = 0;
    int peel_guard = 0;
    while (!queue.empty()) {
      Region* x = queue.front();
      queue.pop_front();
      if (x->empty()) continue;
      double ax = x->orig_area(ev.surf);
      if (ax <= piece_cap) {
        if (bin && bin_area + ax <= piece_cap) {
          *bin = bin->set_union(*x);
          bin_area += ax;
        } else {
          pieces.push_back(x);
          bin = x;
          bin_area = ax;
        }
        continue;
      }
      std::vector<Region> comps = x->components(ev.surf);
      if (comps.size() > 1) {
        for (size_t ci = comps.size(); ci-- > 0;)
          queue.push_front(ev.add(std::move(comps[ci])));
        continue;
      }
      if (++peel_guard > 2 * (int)n_split + 4)
        throw std::runtime_error("nice_covering: step two failed to terminate");
      Capture cap = capture_ball(ev.surf, *x, target,
                                 capture_pool(ev.surf, *x, opt), opt);
      StepCut st = coarea_step(ev, cap.ball, *x, cap.radius / 2.0, opt);
      Region* piece = ev.add(st.grown);
      *x = x->set_minus(*piece);
      root.children.push_back(make_entry(
          "cover_peel", st.cut_len,
          5.58 * std::sqrt(piece_cap) * (1.0 + opt.tol), opt.tol,
          "v=" + std::to_string(vi) + " radius=" + fmt_g(cap.radius)));
      queue.push_front(x);
      queue.push_front(piece);
      bin = nullptr;
      bin_area = 0;
    }
  }

  // Assemble on the final mesh: regions, per-region measures, tile cover,
  // and the inter-region frontier.
  out.surf = std::move(ev.surf);
  out.tri_origin = std::move(ev.origin);
  double mu_max = 0;
  int cover_max = 0;
  for (Region* p : pieces) {
    out.regions.push_back(*p);
    double a = p->orig_area(out.surf);
    out.mu.push_back(a);
    mu_max = std::max(mu_max, a);
    std::vector<int> rt;
    for (size_t ti = 0; ti < live_tiles.size(); ++ti)
      if (!live_tiles[ti]->set_intersect(*p).empty()) rt.push_back((int)ti);
    out.tile_cover.push_back((int)rt.size());
    cover_max = std::max(cover_max, (int)rt.size());
    out.region_tiles.push_back(std::move(rt));
  }
  for (Region* t : live_tiles) out.tiles.push_back(*t);

  std::vector<int> owner(out.surf.nt(), -1);
  for (size_t i = 0; i < out.regions.size(); ++i)
    for (int t : out.regions[i].tris) {
      if (owner[t] >= 0) throw std::runtime_error("nice_covering: regions overlap");
      owner[t] = (int)i;
    }
  for (int e = 0; e < out.surf.ne(); ++e) {
    const Edge& ed = out.surf.edges[e];
    if (ed.boundary()) continue;
    int oa = owner[ed.s0.tri], ob = owner[ed.s1.tri];
    if (oa >= 0 && ob >= 0 && oa != ob) {
      out.gamma_edges.push_back(e);
      out.gamma_len += ed.orig_len;
    }
  }

  double lbound =
      (94.6 * std::sqrt((double)m) + 36.6 * std::sqrt((double)n_split)) *
      std::sqrt(mu_u) * (1.0 + opt.tol);
  root.children.push_back(make_entry(
      "region_count", (double)out.regions.size(), (double)(m + n_split), 0.0,
      "m=" + std::to_string(m) + " n=" + std::to_string((int)n_split)));
  root.children.push_back(make_entry("region_area", mu_max, mu_u / k, 0.0,
                                     "cap43=" + fmt_g(piece_cap)));
  root.children.push_back(
      make_entry("region_tile_cover", (double)cover_max, 40.0, 0.0));
  root.children.push_back(
      make_entry("boundary_length", out.gamma_len, lbound, opt.tol,
                 "edges=" + std::to_string((int)out.gamma_edges.size())));
  root.detail = "m=" + std::to_string(m) + " n=" + std::to_string((int)n_split) +
                " regions=" + std::to_string((int)out.regions.size());
  for (const CertEntry& c : root.children) root.pass = root.pass && c.pass;
  out.cert = std::move(root);
  return out;
}

// ── sweepout assembly ───────────────────────────────────────────────────────

OneSweepout build_one_sweepout(const Covering& c, double eps,
                               const EngineOptions& opt) {
  if (c.regions.empty())
    throw std::invalid_argument("build_one_sweepout: empty covering");
  if (!c.cert.all_pass())
    throw std::invalid_argument("build_one_sweepout: covering not certified");
  for (int tc : c.tile_cover)
    if (tc > 40)
      throw std::invalid_argument("build_one_sweepout: region exceeds 40 tiles");

  double mu_total = c.mu_total;
  double mu_max = 0;
  for (double a : c.mu) mu_max = std::max(mu_max, a);
  if (!(eps > 0)) eps = 0.001 * std::sqrt(mu_max);
  double delta_env = small_volume_delta(c.surf.total_orig_area, eps);

  ForestOut fo = run_forest(c.surf, c.regions, delta_env, opt);

  OneSweepout out;
  CertEntry root = make_entry("build_one_sweepout", 0.0, 0.0, opt.tol, "");
  root.pass = true;
  std::vector<SweepFunction> region_fs;
  for (size_t j = 0; j < c.regions.size(); ++j) {
    SweepFunction fj = concat_many(fo.surf, fo.stages[j]);
    fj.gamma_edges.clear();
    WidthProfile prof = width_profile(fo.surf, fj);
    double mu_j = fo.domains[j].orig_area(fo.surf);
    CertEntry rj =
        make_entry("region_sweep", prof.sup_free_bound(),
                   489.0 * std::sqrt(mu_j) * (1.0 + opt.tol), opt.tol,
                   "region=" + std::to_string((int)j) + " mu=" + fmt_g(mu_j) +
                       " leaves=" + std::to_string(fo.leaf_count[j]));
    rj.children = std::move(fo.node_certs[j]);
    for (const CertEntry& ch : rj.children) rj.pass = rj.pass && ch.all_pass();
    root.children.push_back(std::move(rj));
    region_fs.push_back(std::move(fj));
  }

  out.f = concat_many(fo.surf, region_fs);
  SweepCheck chk = verify_monotone(fo.surf, out.f);
  if (!chk.ok)
    throw std::runtime_error("build_one_sweepout: invalid sweep: " + chk.issue);
  WidthProfile prof = width_profile(fo.surf, out.f);
  out.width_free_bound = prof.sup_free_bound();
  out.width_free_measured = measured_free(prof);
  for (int e : out.f.gamma_edges) out.gamma_len += fo.surf.edges[e].orig_len;

  double wbound = 489.0 * std::sqrt(mu_total / c.k) * (1.0 + opt.tol) + eps;
  root.children.push_back(make_entry(
      "free_width", out.width_free_bound, wbound, opt.tol,
      "k=" + std::to_string(c.k) + " eps=" + fmt_g(eps)));
  root.children.push_back(make_entry(
      "gamma_length", out.gamma_len, c.gamma_len * (1.0 + 1e-9) + 1e-12, 0.0,
      "edges=" + std::to_string((int)out.f.gamma_edges.size())));
  root.measured = out.width_free_bound;
  root.bound = wbound;
  for (const CertEntry& ch : root.children) root.pass = root.pass && ch.all_pass();
  root.detail = "regions=" + std::to_string((int)c.regions.size());
  out.cert = std::move(root);

  out.tri_origin.resize(fo.surf.nt());
  for (int t = 0; t < fo.surf.nt(); ++t)
    out.tri_origin[t] = c.tri_origin[fo.origin[t]];
  out.surf = std::move(fo.surf);
  return out;
}

KSweepout assemble_k_sweepout(OneSweepout base, int k) {
  if (k < 1)
    throw std::invalid_argument("assemble_k_sweepout: k must be positive");
  SweepCheck chk = verify_monotone(base.surf, base.f);
  if (!chk.ok)
    throw std::invalid_argument("assemble_k_sweepout: invalid sweep: " +
                                chk.issue);
  if (base.f.domain.size() != base.surf.nt())
    throw std::invalid_argument(
        "assemble_k_sweepout: sweep must cover the whole surface");
  KSweepout out;
  out.k = k;
  out.bound = k * base.width_free_bound + base.gamma_len;
  out.cert = make_entry(
      "assemble_k_sweepout", out.bound, out.bound, 0.0,
      "k=" + std::to_string(k) + " width_free=" + fmt_g(base.width_free_bound) +
          " gamma=" + fmt_g(base.gamma_len));
  out.base = std::move(base);
  return out;
}

Cycle1 sample_k_cycle(const KSweepout& ks, const std::vector<double>& ts) {
  if (ts.empty() || (int)ts.size() > ks.k)
    throw std::invalid_argument("sample_k_cycle: need 1 to k parameters");
  Cycle1 acc;
  for (double t : ts)
    acc = acc.plus(level_cycle(ks.base.surf, ks.base.f, t), ks.base.surf);
  return acc;
}

MainBoundReport verify_main_bound(const ConformalSurface& s,
                                  const KSweepout& ks) {
  MainBoundReport out;
  out.b = ks.bound;
  out.mu = s.total_orig_area;
  out.k = ks.k;
  out.genus = s.genus;
  double g = std::max(0, s.genus);
  double root_mu = std::sqrt(out.mu);
  out.bound_main =
      1600.0 * std::max(std::sqrt((double)ks.k), std::sqrt(g)) * root_mu;
  out.bound_sharp = (489.0 * std::sqrt((double)ks.k) +
                     94.6 * std::sqrt(67.0 * g) +
                     36.6 * std::sqrt(std::max(67.0 * g, 43.0 * ks.k))) *
                    root_mu;
  out.pass_main = out.b <= out.bound_main;
  out.pass_sharp = out.b <= out.bound_sharp;
  out.cert = make_entry("verify_main_bound", out.b, out.bound_main, 0.0,
                        "k=" + std::to_string(ks.k) +
                            " genus=" + std::to_string(s.genus) +
                            " mu=" + fmt_g(out.mu));
  out.cert.children.push_back(
      make_entry("sharp_bound", out.b, out.bound_sharp, 0.0));
  out.cert.pass = out.pass_main;  // the sharp bound is informational
  return out;
}

} // namespace sweepcert
