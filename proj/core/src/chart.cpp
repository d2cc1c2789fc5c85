#include "sweepcert/chart.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include "sweepcert/distance.hpp"
#include "sweepcert/geometry.hpp"

namespace sweepcert {

namespace {

// Azimuthal equidistant projection at c: radial distances are exact, angles
// come from an orthonormal tangent frame.
struct Azimuth {
  Model m;
  Vec3 c;
  Vec3 e1, e2;

  std::array<double, 2> operator()(const Vec3& q) const {
    double rho = point_dist(m, c, q);
    if (!(rho > 0)) return {0.0, 0.0};
    Vec3 u = tangent_toward(m, c, q);
    return {rho * model_dot(m, u, e1), rho * model_dot(m, u, e2)};
  }
};

Azimuth make_azimuth(Model m, const Vec3& c, const std::vector<Vec3>& refs) {
  Azimuth az{m, c, {1, 0, 0}, {0, 1, 0}};
  bool have1 = false;
  for (const Vec3& q : refs)
    if (point_dist(m, c, q) > 1e-13) {
      az.e1 = tangent_toward(m, c, q);
      have1 = true;
      break;
    }
  if (m == Model::Flat) {
    if (have1) az.e2 = {-az.e1.y, az.e1.x, 0};
    return az;
  }
  double cc = model_dot(m, c, c);
  auto orthogonalize = [&](Vec3 w) {
    w = w - c * (model_dot(m, w, c) / cc);
    w = w - az.e1 * model_dot(m, w, az.e1);
    double n2 = model_dot(m, w, w);
    if (n2 > 1e-18) {
      az.e2 = w * (1.0 / std::sqrt(n2));
      return true;
    }
    return false;
  };
  for (const Vec3& q : refs) {
    if (point_dist(m, c, q) <= 1e-13) continue;
    if (orthogonalize(tangent_toward(m, c, q))) return az;
  }
  for (const Vec3& w : {Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}})
    if (orthogonalize(w)) return az;
  return az;
}

} // namespace

const std::array<double, 2>& Chart::vertex_pos(int v) const {
  auto it = std::lower_bound(verts.begin(), verts.end(), v);
  if (it == verts.end() || *it != v)
    throw std::invalid_argument("Chart::vertex_pos: vertex not in chart");
  return pos[it - verts.begin()];
}

Chart chart_around(const ConformalSurface& s, const Region& region,
                   int center) {
  if (region.empty())
    throw std::invalid_argument("chart_around: empty region");
  if (center < 0 || center >= s.nv())
    throw std::invalid_argument("chart_around: bad center vertex");

  Chart ch;
  ch.region = region;
  ch.center = center;
  ch.scale = s.lambda[center];

  int nr = region.size();
  std::map<int, int> tidx;
  for (int i = 0; i < nr; ++i) tidx[region.tris[i]] = i;

  int root0 = -1;
  for (int i = 0; i < nr && root0 < 0; ++i)
    for (int c = 0; c < 3; ++c)
      if (s.tris[region.tris[i]].v[c] == center) {
        root0 = i;
        break;
      }
  if (root0 < 0)
    throw std::invalid_argument("chart_around: center not in region");

  // develop triangles into per-component common frames
  std::vector<std::array<Vec3, 3>> pose(nr);
  std::vector<int> comp(nr, -1);
  std::vector<std::vector<int>> comps;
  auto develop = [&](int rootIdx) {
    std::vector<int> order{rootIdx};
    comp[rootIdx] = (int)comps.size();
    pose[rootIdx] = s.placed[region.tris[rootIdx]];
    for (size_t qi = 0; qi < order.size(); ++qi) {
      int i = order[qi];
      int t = region.tris[i];
      for (int side = 0; side < 3; ++side) {
        SideRef mt = s.mate(t, side);
        if (!mt.valid()) continue;
        auto it = tidx.find(mt.tri);
        if (it == tidx.end() || comp[it->second] >= 0) continue;
        int j = it->second;
        const Tri& nt = s.tris[mt.tri];
        int sd = mt.side;
        std::array<Vec3, 3>& np = pose[j];
        np[sd] = pose[i][(side + 1) % 3];
        np[(sd + 1) % 3] = pose[i][side];
        np[(sd + 2) % 3] =
            unfold_across(s.model, np[sd], np[(sd + 1) % 3],
                          nt.len[(sd + 2) % 3], nt.len[(sd + 1) % 3],
                          pose[i][(side + 2) % 3]);
        comp[j] = comp[rootIdx];
        order.push_back(j);
      }
    }
    comps.push_back(std::move(order));
  };
  develop(root0);
  for (int i = 0; i < nr; ++i)
    if (comp[i] < 0) develop(i);

  // per-vertex world position: first placement wins
  std::map<int, Vec3> vworld;
  std::map<int, int> vcomp;
  for (const auto& order : comps)
    for (int i : order)
      for (int c = 0; c < 3; ++c) {
        int v = s.tris[region.tris[i]].v[c];
        if (!vworld.count(v)) {
          vworld[v] = pose[i][c];
          vcomp[v] = comp[i];
        }
      }

  // azimuthal projection per component, packed along x
  int ncomp = (int)comps.size();
  std::vector<Azimuth> az;
  az.reserve(ncomp);
  for (int ci = 0; ci < ncomp; ++ci) {
    int base = ci == 0 ? center : -1;
    std::vector<Vec3> refs;
    for (const auto& [v, p] : vworld)
      if (vcomp[v] == ci) {
        if (base < 0) base = v;
        refs.push_back(p);
      }
    az.push_back(make_azimuth(s.model, vworld.at(base), refs));
  }
  std::vector<std::array<double, 2>> lo(ncomp, {kInf, kInf});
  std::vector<std::array<double, 2>> hi(ncomp, {-kInf, -kInf});
  std::map<int, std::array<double, 2>> vplane;
  for (const auto& [v, p] : vworld) {
    int ci = vcomp[v];
    std::array<double, 2> q = az[ci](p);
    q[0] *= ch.scale;
    q[1] *= ch.scale;
    lo[ci][0] = std::min(lo[ci][0], q[0]);
    hi[ci][0] = std::max(hi[ci][0], q[0]);
    vplane[v] = q;
  }
  std::vector<double> shift(ncomp, 0.0);
  double cursor = hi[0][0];
  for (int ci = 1; ci < ncomp; ++ci) {
    double span = hi[ci][0] - lo[ci][0];
    double gap = 0.125 * (hi[0][0] - lo[0][0] + span) + 1e-12;
    shift[ci] = cursor + gap - lo[ci][0];
    cursor += gap + span;
  }
  for (auto& [v, q] : vplane) q[0] += shift[vcomp[v]];

  ch.verts.reserve(vplane.size());
  ch.pos.reserve(vplane.size());
  for (const auto& [v, q] : vplane) {
    ch.verts.push_back(v);
    ch.pos.push_back(q);
  }
  const std::array<double, 2>& pc = ch.vertex_pos(center);
  for (const auto& q : ch.pos)
    ch.radius = std::max(ch.radius, std::hypot(q[0] - pc[0], q[1] - pc[1]));

  // sampled distortion: mesh edges plus corner-to-side-midpoint chords
  auto note = [&](double dplane, double dsurf) {
    if (!(dsurf > 0) || !(dplane > 0)) return;
    double r = dplane / dsurf;
    ch.lip = std::max(ch.lip, std::max(r, 1.0 / r));
  };
  for (int i = 0; i < nr; ++i) {
    int t = region.tris[i];
    const Tri& tr = s.tris[t];
    int ci = comp[i];
    for (int side = 0; side < 3; ++side) {
      int va = tr.v[side], vb = tr.v[(side + 1) % 3];
      const auto& qa = vplane.at(va);
      const auto& qb = vplane.at(vb);
      note(std::hypot(qa[0] - qb[0], qa[1] - qb[1]),
           s.edges[tr.edge[side]].orig_len);

      Vec3 midw = point_lerp(s.model, pose[i][side], pose[i][(side + 1) % 3], 0.5);
      std::array<double, 2> qm = az[ci](midw);
      qm[0] = qm[0] * ch.scale + shift[ci];
      qm[1] *= ch.scale;
      int copp = (side + 2) % 3;
      std::array<double, 2> qc = az[ci](pose[i][copp]);
      qc[0] = qc[0] * ch.scale + shift[ci];
      qc[1] *= ch.scale;
      Vec3 midl = point_lerp(s.model, s.placed[t][side],
                             s.placed[t][(side + 1) % 3], 0.5);
      double dsurf = chord_value_integral(
          s.model, s.placed[t][0], s.placed[t][1], s.placed[t][2],
          s.corner_lambda(t, 0), s.corner_lambda(t, 1), s.corner_lambda(t, 2),
          s.placed[t][copp], midl);
      note(std::hypot(qc[0] - qm[0], qc[1] - qm[1]), dsurf);
    }
  }
  return ch;
}

ChartCover chart_extract(const ConformalSurface& s, const Region& u,
                         double delta, double max_lip, int max_retries) {
  if (!(delta > 0))
    throw std::invalid_argument("chart_extract: delta must be positive");
  if (u.empty())
    throw std::invalid_argument("chart_extract: empty region");
  std::vector<int> uverts = u.vertex_set(s);
  SteinerGraph g(s, 2);

  for (int attempt = 0;; ++attempt) {
    std::vector<int> centers;
    std::vector<double> best(s.nv(), kInf);
    while (true) {
      int pick = -1;
      double bd = delta / 2;
      for (int v : uverts)
        if (best[v] > bd) {
          bd = best[v];
          pick = v;
        }
      if (pick < 0) break;
      centers.push_back(pick);
      SteinerGraph::Options o;
      o.orig_metric = true;
      o.stop_dist = delta;
      auto res = g.run({{g.vertex_node(pick), 0.0}}, o);
      for (int v : uverts)
        best[v] = std::min(best[v], res.dist[g.vertex_node(v)]);
    }
    ChartCover cover;
    cover.delta = delta;
    cover.retries = attempt;
    for (int v : uverts)
      cover.cover_radius = std::max(cover.cover_radius, best[v]);

    bool ok = true;
    for (int c : centers) {
      SteinerGraph::Options o;
      o.orig_metric = true;
      o.stop_dist = 1.5 * delta;
      auto res = g.run({{g.vertex_node(c), 0.0}}, o);
      Region rc;
      for (int t : u.tris) {
        double d = kInf;
        for (int k = 0; k < 3; ++k)
          d = std::min(d, res.dist[g.vertex_node(s.tris[t].v[k])]);
        if (d <= delta) rc.tris.push_back(t);
      }
      Chart ch = chart_around(s, rc, c);
      if (ch.lip > max_lip) {
        ok = false;
        break;
      }
      cover.charts.push_back(std::move(ch));
    }
    if (ok) return cover;
    if (attempt >= max_retries)
      throw std::runtime_error(
          "chart_extract: distortion target unreachable at every tried scale");
    delta *= 0.5;
  }
}

} // namespace sweepcert
