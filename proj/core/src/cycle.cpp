#include "sweepcert/cycle.hpp"

#include <algorithm>
#include <cmath>

namespace sweepcert {

namespace {

constexpr double kZeroLen = 1e-15;

bool end_less(const ChordEnd& x, const ChordEnd& y) {
  if (x.side != y.side) return x.side < y.side;
  return x.u < y.u;
}

void orient(Chord& c) {
  if (end_less(c.b, c.a)) std::swap(c.a, c.b);
}

bool chord_less(const Chord& x, const Chord& y) {
  if (x.tri != y.tri) return x.tri < y.tri;
  if (x.a.side != y.a.side) return x.a.side < y.a.side;
  if (x.a.u != y.a.u) return x.a.u < y.a.u;
  if (x.b.side != y.b.side) return x.b.side < y.b.side;
  return x.b.u < y.b.u;
}

// Symmetric difference of a list of intervals over one axis.  Spans shorter
// than eps are treated as noise and dropped; touching spans merge.
std::vector<std::pair<double, double>> interval_xor(
    std::vector<std::pair<double, double>> iv, double eps) {
  std::vector<std::pair<double, int>> ev;
  ev.reserve(iv.size() * 2);
  for (auto& [a, b] : iv) {
    if (b - a < eps) continue;
    ev.push_back({a, +1});
    ev.push_back({b, -1});
  }
  std::sort(ev.begin(), ev.end());
  std::vector<std::pair<double, double>> out;
  int cover = 0;
  double open = 0.0;
  for (size_t i = 0; i < ev.size();) {
    size_t j = i;
    int before = cover;
    while (j < ev.size() && ev[j].first == ev[i].first) cover += ev[j++].second;
    bool was_odd = before % 2 != 0, is_odd = cover % 2 != 0;
    if (!was_odd && is_odd) {
      open = ev[i].first;
    } else if (was_odd && !is_odd) {
      if (ev[i].first - open >= eps) {
        if (!out.empty() && open - out.back().second < eps)
          out.back().second = ev[i].first;
        else
          out.push_back({open, ev[i].first});
      }
    }
    i = j;
  }
  return out;
}

struct LinePoint {
  double t;
  ChordEnd end;
};

}  // namespace

Vec3 Cycle1::chord_point(const ConformalSurface& s, int tri, const ChordEnd& e) {
  return s.side_point(tri, e.side, e.u);
}

void Cycle1::canonicalize(const ConformalSurface& s) {
  // Edge intervals: per-edge symmetric difference.
  std::sort(intervals.begin(), intervals.end(),
            [](const EdgeInterval& x, const EdgeInterval& y) {
              if (x.edge != y.edge) return x.edge < y.edge;
              return x.p0 < y.p0;
            });
  std::vector<EdgeInterval> new_iv;
  for (size_t i = 0; i < intervals.size();) {
    size_t j = i;
    std::vector<std::pair<double, double>> batch;
    while (j < intervals.size() && intervals[j].edge == intervals[i].edge) {
      batch.push_back({intervals[j].p0, intervals[j].p1});
      ++j;
    }
    for (auto& [a, b] : interval_xor(std::move(batch), kZeroLen))
      new_iv.push_back({intervals[i].edge, a, b});
    i = j;
  }
  intervals = std::move(new_iv);

  // Chords: exact parity first, then geometric cancellation of coinciding or
  // collinear-overlapping chords within each triangle.
  chords.erase(std::remove_if(chords.begin(), chords.end(),
                              [&](const Chord& c) {
                                return point_dist(s.model,
                                                  chord_point(s, c.tri, c.a),
                                                  chord_point(s, c.tri, c.b)) <
                                       1e-13;
                              }),
               chords.end());
  for (Chord& c : chords) orient(c);
  std::sort(chords.begin(), chords.end(), chord_less);
  std::vector<Chord> survivors;
  for (size_t i = 0; i < chords.size();) {
    size_t j = i;
    auto same = [&](const Chord& x, const Chord& y) {
      return x.tri == y.tri && x.a.side == y.a.side && x.a.u == y.a.u &&
             x.b.side == y.b.side && x.b.u == y.b.u;
    };
    while (j < chords.size() && same(chords[j], chords[i])) ++j;
    if ((j - i) % 2 != 0) survivors.push_back(chords[i]);
    i = j;
  }

  std::vector<Chord> reduced;
  for (size_t i = 0; i < survivors.size();) {
    size_t j = i;
    while (j < survivors.size() && survivors[j].tri == survivors[i].tri) ++j;
    int tri = survivors[i].tri;
    size_t n = j - i;
    if (n == 1) {
      reduced.push_back(survivors[i]);
      i = j;
      continue;
    }
    // Group the triangle's chords into collinear classes.  Two chords are
    // collinear when all four endpoints lie on one geodesic, which in every
    // model means the ambient points are linearly dependent with the chord's
    // span.
    std::vector<Vec3> pa(n), pb(n);
    for (size_t k = 0; k < n; ++k) {
      pa[k] = chord_point(s, tri, survivors[i + k].a);
      pb[k] = chord_point(s, tri, survivors[i + k].b);
    }
    std::vector<int> cls(n, -1);
    int ncls = 0;
    for (size_t k = 0; k < n; ++k) {
      if (cls[k] >= 0) continue;
      cls[k] = ncls;
      Vec3 nrm = (s.model == Model::Flat) ? Vec3{0, 0, 1} : cross(pa[k], pb[k]);
      double scale = (s.model == Model::Flat)
                         ? enorm(pb[k] - pa[k])
                         : enorm(nrm);
      for (size_t l = k + 1; l < n; ++l) {
        if (cls[l] >= 0) continue;
        double d1, d2;
        if (s.model == Model::Flat) {
          Vec3 dir = pb[k] - pa[k];
          d1 = std::abs(cross(dir, pa[l] - pa[k]).z);
          d2 = std::abs(cross(dir, pb[l] - pa[k]).z);
          double sc = scale * (scale + enorm(pa[l] - pa[k]) + enorm(pb[l] - pa[k]));
          if (d1 <= 1e-12 * std::max(1.0, sc) && d2 <= 1e-12 * std::max(1.0, sc))
            cls[l] = cls[k];
        } else {
          d1 = std::abs(edot(nrm, pa[l]));
          d2 = std::abs(edot(nrm, pb[l]));
          double sc = scale * (enorm(pa[l]) + enorm(pb[l]));
          if (d1 <= 1e-11 * std::max(1.0, sc) && d2 <= 1e-11 * std::max(1.0, sc))
            cls[l] = cls[k];
        }
      }
      ++ncls;
    }
    for (int c = 0; c < ncls; ++c) {
      std::vector<size_t> members;
      for (size_t k = 0; k < n; ++k)
        if (cls[k] == c) members.push_back(k);
      if (members.size() == 1) {
        reduced.push_back(survivors[i + members[0]]);
        continue;
      }
      // Joint mod-2 reduction along the common geodesic: parameterize every
      // endpoint by signed distance from a reference end, take the interval
      // symmetric difference, and re-emit chords between surviving breaks.
      size_t r = members[0];
      Vec3 ref = pa[r];
      Vec3 dir = pb[r] - pa[r];
      auto par = [&](const Vec3& q) {
        double t = point_dist(s.model, ref, q);
        return (edot(q - ref, dir) >= 0) ? t : -t;
      };
      std::vector<LinePoint> pts;
      std::vector<std::pair<double, double>> iv;
      for (size_t k : members) {
        double ta = par(pa[k]), tb = par(pb[k]);
        const Chord& ch = survivors[i + k];
        pts.push_back({ta, ch.a});
        pts.push_back({tb, ch.b});
        iv.push_back({std::min(ta, tb), std::max(ta, tb)});
      }
      std::sort(pts.begin(), pts.end(),
                [](const LinePoint& x, const LinePoint& y) { return x.t < y.t; });
      auto nearest = [&](double t) {
        size_t best = 0;
        double bd = std::abs(pts[0].t - t);
        for (size_t k = 1; k < pts.size(); ++k) {
          double d = std::abs(pts[k].t - t);
          if (d < bd) bd = d, best = k;
        }
        return pts[best].end;
      };
      for (auto& [a, b] : interval_xor(std::move(iv), 1e-11))
        reduced.push_back({tri, nearest(a), nearest(b)});
    }
    i = j;
  }
  for (Chord& c : reduced) orient(c);
  std::sort(reduced.begin(), reduced.end(), chord_less);
  chords = std::move(reduced);
}

Cycle1 Cycle1::plus(const Cycle1& other, const ConformalSurface& s) const {
  Cycle1 out = *this;
  out.chords.insert(out.chords.end(), other.chords.begin(), other.chords.end());
  out.intervals.insert(out.intervals.end(), other.intervals.begin(),
                       other.intervals.end());
  out.canonicalize(s);
  return out;
}

double Cycle1::model_length(const ConformalSurface& s) const {
  double len = 0.0;
  for (const Chord& c : chords)
    len += point_dist(s.model, chord_point(s, c.tri, c.a),
                      chord_point(s, c.tri, c.b));
  for (const EdgeInterval& iv : intervals)
    len += (iv.p1 - iv.p0) * s.edges[iv.edge].model_len;
  return len;
}

double Cycle1::orig_length(const ConformalSurface& s) const {
  double len = 0.0;
  for (const Chord& c : chords) {
    const Tri& t = s.tris[c.tri];
    len += chord_value_integral(
        s.model, s.placed[c.tri][0], s.placed[c.tri][1], s.placed[c.tri][2],
        s.lambda[t.v[0]], s.lambda[t.v[1]], s.lambda[t.v[2]],
        chord_point(s, c.tri, c.a), chord_point(s, c.tri, c.b));
  }
  for (const EdgeInterval& iv : intervals)
    len += s.edge_orig_sublength(iv.edge, iv.p0, iv.p1);
  return len;
}

bool Cycle1::same_as(const Cycle1& other, double tol) const {
  if (chords.size() != other.chords.size()) return false;
  if (intervals.size() != other.intervals.size()) return false;
  for (size_t i = 0; i < chords.size(); ++i) {
    const Chord &x = chords[i], &y = other.chords[i];
    if (x.tri != y.tri || x.a.side != y.a.side || x.b.side != y.b.side)
      return false;
    if (std::abs(x.a.u - y.a.u) > tol || std::abs(x.b.u - y.b.u) > tol)
      return false;
  }
  for (size_t i = 0; i < intervals.size(); ++i) {
    const EdgeInterval &x = intervals[i], &y = other.intervals[i];
    if (x.edge != y.edge) return false;
    if (std::abs(x.p0 - y.p0) > tol || std::abs(x.p1 - y.p1) > tol) return false;
  }
  return true;
}

Cycle1 cycle_from_edges(const std::vector<int>& edge_ids) {
  Cycle1 z;
  for (int e : edge_ids) z.intervals.push_back({e, 0.0, 1.0});
  return z;
}

double edges_orig_length(const ConformalSurface& s,
                         const std::vector<int>& edge_ids) {
  double len = 0.0;
  for (int e : edge_ids) len += s.edges[e].orig_len;
  return len;
}

}  // namespace sweepcert
