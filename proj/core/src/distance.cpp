#include "sweepcert/distance.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>

namespace sweepcert {

SteinerGraph::SteinerGraph(const ConformalSurface& s, int per_edge)
    : surf_(&s), per_edge_(per_edge) {
  if (per_edge < 0 || per_edge > 64) throw std::runtime_error("per_edge out of range");
  node_count_ = s.nv() + s.ne() * per_edge;

  tri_nodes_.resize(s.nt());
  for (int t = 0; t < s.nt(); ++t) {
    auto& list = tri_nodes_[t];
    list.reserve(3 + 3 * per_edge);
    const Tri& tr = s.tris[t];
    for (int c = 0; c < 3; ++c)
      list.push_back({tr.v[c], s.placed[t][c], s.lambda[tr.v[c]]});
    for (int sd = 0; sd < 3; ++sd) {
      int e = tr.edge[sd];
      for (int i = 0; i < per_edge; ++i) {
        double p = double(i + 1) / (per_edge + 1);
        double u = s.side_param_from_edge(t, sd, p);
        list.push_back({edge_node(e, i), s.side_point(t, sd, u), s.lambda_on_edge(e, p)});
      }
    }
  }

  vertex_tris_.resize(s.nv());
  vertex_dual_orig_.assign(s.nv(), 0.0);
  for (int t = 0; t < s.nt(); ++t)
    for (int c = 0; c < 3; ++c) {
      int v = s.tris[t].v[c];
      if (vertex_tris_[v].empty() || vertex_tris_[v].back() != t)
        vertex_tris_[v].push_back(t);
      vertex_dual_orig_[v] += s.tri_orig_area[t] / 3.0;
    }
}

std::pair<int, double> SteinerGraph::node_edge_param(int n) const {
  if (n < surf_->nv()) return {-1, 0.0};
  int k = n - surf_->nv();
  int e = k / per_edge_;
  int i = k % per_edge_;
  return {e, double(i + 1) / (per_edge_ + 1)};
}

double SteinerGraph::arc_weight(bool orig, int t, const Entry& a, const Entry& b) const {
  if (!orig) return point_dist(surf_->model, a.pos, b.pos);
  const Tri& tr = surf_->tris[t];
  return chord_value_integral(surf_->model, surf_->placed[t][0], surf_->placed[t][1],
                              surf_->placed[t][2], surf_->lambda[tr.v[0]],
                              surf_->lambda[tr.v[1]], surf_->lambda[tr.v[2]], a.pos,
                              b.pos);
}

SteinerGraph::Result SteinerGraph::run(const std::vector<std::pair<int, double>>& sources,
                                       const Options& opt) const {
  Result res;
  res.dist.assign(node_count_, kInf);
  using QE = std::pair<double, int>;
  std::priority_queue<QE, std::vector<QE>, std::greater<QE>> pq;
  for (auto& [n, d0] : sources) {
    if (n < 0 || n >= node_count_) throw std::runtime_error("bad source node");
    if (d0 < res.dist[n]) {
      res.dist[n] = d0;
      pq.push({d0, n});
    }
  }

  auto tri_allowed = [&](int t) {
    return !opt.tri_mask || (*opt.tri_mask)[t] != 0;
  };

  std::vector<char> done(node_count_, 0);
  std::vector<int> tris_of_node;
  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (done[u]) continue;
    done[u] = 1;
    res.last_popped_dist = d;
    if (d > opt.stop_dist) {
      res.stopped_early = true;
      break;
    }
    if (is_vertex_node(u)) {
      double dual = 0;
      for (int t : vertex_tris_[u]) {
        if (!tri_allowed(t)) continue;
        for (int c = 0; c < 3; ++c)
          if (surf_->tris[t].v[c] == u) dual += surf_->tri_orig_area[t] / 3.0;
      }
      if (dual > 0) {
        res.reached_orig_area += dual;
        res.capture_profile.push_back({d, res.reached_orig_area});
        if (res.reached_orig_area >= opt.stop_capture_orig_area) {
          res.stopped_early = true;
          break;
        }
      }
    }

    tris_of_node.clear();
    if (is_vertex_node(u)) {
      tris_of_node = vertex_tris_[u];
    } else {
      auto [e, p] = node_edge_param(u);
      const Edge& ed = surf_->edges[e];
      tris_of_node.push_back(ed.s0.tri);
      if (ed.s1.valid() && ed.s1.tri != ed.s0.tri) tris_of_node.push_back(ed.s1.tri);
    }

    for (int t : tris_of_node) {
      if (!tri_allowed(t)) continue;
      const auto& list = tri_nodes_[t];
      for (const Entry& eu : list) {
        if (eu.node != u) continue;
        for (const Entry& ew : list) {
          if (ew.node == u || done[ew.node]) continue;
          double nd = d + arc_weight(opt.orig_metric, t, eu, ew);
          if (nd < res.dist[ew.node]) {
            res.dist[ew.node] = nd;
            pq.push({nd, ew.node});
          }
        }
      }
    }
  }
  return res;
}

std::vector<double> SteinerGraph::vertex_distances(const Result& r) const {
  return std::vector<double>(r.dist.begin(), r.dist.begin() + surf_->nv());
}

DistanceField distance_field(const ConformalSurface& s,
                             const std::vector<int>& source_vertices, int per_edge,
                             const Region* within) {
  std::vector<std::uint8_t> mask;
  SteinerGraph::Options opt;
  if (within) {
    mask.assign(s.nt(), 0);
    for (int t : within->tris) mask[t] = 1;
    opt.tri_mask = &mask;
  }
  std::vector<std::pair<int, double>> src;
  for (int v : source_vertices) src.push_back({v, 0.0});

  DistanceField out;
  out.per_edge = per_edge;
  SteinerGraph g1(s, per_edge);
  auto r1 = g1.run(src, opt);
  SteinerGraph g2(s, 2 * per_edge);
  auto r2 = g2.run(src, opt);
  out.vertex_dist = g2.vertex_distances(r2);
  double eps = 0;
  for (int v = 0; v < s.nv(); ++v) {
    double a = r1.dist[v], b = r2.dist[v];
    if (std::isfinite(a) && std::isfinite(b)) eps = std::max(eps, std::abs(a - b));
  }
  out.eps_disc = eps;
  return out;
}

Region sublevel_region(const ConformalSurface& s, const std::vector<double>& vertex_dist,
                       double r) {
  Region out;
  for (int t = 0; t < s.nt(); ++t) {
    double mn = kInf;
    for (int c = 0; c < 3; ++c) mn = std::min(mn, vertex_dist[s.tris[t].v[c]]);
    if (mn <= r) out.tris.push_back(t);
  }
  return out;
}

} // namespace sweepcert
