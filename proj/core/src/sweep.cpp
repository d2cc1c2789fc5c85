#include "sweepcert/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace sweepcert {

namespace {

double cross_clamped(Model m, double d, double a, double b) {
  if (a <= 0.0) return 0.0;
  if (b <= 0.0) return 1.0;
  return edge_crossing_param(m, d, a, b);
}

// Crossing parameter of the side interpolant with f(0) = a, f(1) = b.
double side_crossing(Model m, double len, double a, double b, double t) {
  if (a < b) return cross_clamped(m, len, t - a, b - t);
  return 1.0 - cross_clamped(m, len, t - b, a - t);
}

struct PInt {
  double lo = 0.0, hi = 0.0;
  bool empty = true;
};

PInt edge_sublevel(Model m, double elen, double fa, double fb, double t) {
  bool ia = fa <= t, ib = fb <= t;
  if (ia && ib) return {0.0, 1.0, false};
  if (!ia && !ib) return {};
  if (ia) return {0.0, cross_clamped(m, elen, t - fa, fb - t), false};
  return {1.0 - cross_clamped(m, elen, t - fb, fa - t), 1.0, false};
}

double sub_measure(const ConformalSurface& s, int e, const PInt& p) {
  return p.empty ? 0.0 : s.edge_orig_sublength(e, p.lo, p.hi);
}

// Symmetric difference of two parameter intervals as up to three spans.
int xor_spans(const PInt& x, const PInt& y, double lo[3], double hi[3]) {
  double bp[4];
  int nb = 0;
  if (!x.empty) {
    bp[nb++] = x.lo;
    bp[nb++] = x.hi;
  }
  if (!y.empty) {
    bp[nb++] = y.lo;
    bp[nb++] = y.hi;
  }
  std::sort(bp, bp + nb);
  int n = 0;
  for (int i = 0; i + 1 < nb; ++i) {
    if (bp[i + 1] - bp[i] < 1e-15) continue;
    double m = 0.5 * (bp[i] + bp[i + 1]);
    bool in1 = !x.empty && m > x.lo && m < x.hi;
    bool in2 = !y.empty && m > y.lo && m < y.hi;
    if (in1 == in2) continue;
    if (n > 0 && bp[i] - hi[n - 1] < 1e-15) {
      hi[n - 1] = bp[i + 1];
    } else {
      lo[n] = bp[i];
      hi[n] = bp[i + 1];
      ++n;
    }
  }
  return n;
}

}  // namespace

int SweepFunction::domain_index(int tri) const {
  auto it = std::lower_bound(domain.tris.begin(), domain.tris.end(), tri);
  if (it == domain.tris.end() || *it != tri) return -1;
  return int(it - domain.tris.begin());
}

double SweepFunction::min_value() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& v : vals) m = std::min({m, v[0], v[1], v[2]});
  return m;
}

double SweepFunction::max_value() const {
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& v : vals) m = std::max({m, v[0], v[1], v[2]});
  return m;
}

SweepCheck verify_monotone(const ConformalSurface& s, const SweepFunction& f) {
  SweepCheck out;
  auto fail = [&](const std::string& msg) {
    out.ok = false;
    if (out.issue.empty()) out.issue = msg;
  };
  if (f.domain.tris.empty()) {
    fail("empty domain");
    return out;
  }
  if (f.vals.size() != f.domain.tris.size()) {
    fail("value array does not match domain");
    return out;
  }
  if (!std::is_sorted(f.domain.tris.begin(), f.domain.tris.end())) {
    fail("domain not normalized");
    return out;
  }
  for (const auto& v : f.vals)
    for (int c = 0; c < 3; ++c)
      if (!std::isfinite(v[c])) fail("non-finite corner value");
  if (!std::is_sorted(f.jump_edges.begin(), f.jump_edges.end()))
    fail("jump edges not sorted");
  if (!std::is_sorted(f.gamma_edges.begin(), f.gamma_edges.end()))
    fail("gamma edges not sorted");
  std::vector<int> boundary = f.domain.boundary_edges(s);
  for (int e : f.jump_edges) {
    if (e < 0 || e >= s.ne()) {
      fail("jump edge out of range");
      continue;
    }
    const Edge& ed = s.edges[e];
    if (ed.boundary() || f.domain_index(ed.s0.tri) < 0 ||
        f.domain_index(ed.s1.tri) < 0)
      fail("jump edge not interior to domain");
  }
  for (int e : f.gamma_edges) {
    bool in_jump = std::binary_search(f.jump_edges.begin(), f.jump_edges.end(), e);
    bool on_bdry = std::binary_search(boundary.begin(), boundary.end(), e);
    if (!in_jump && !on_bdry) fail("gamma edge neither jump nor boundary");
  }
  for (int e = 0; e < s.ne(); ++e) {
    const Edge& ed = s.edges[e];
    if (ed.boundary()) continue;
    int i1 = f.domain_index(ed.s0.tri);
    int i2 = f.domain_index(ed.s1.tri);
    if (i1 < 0 || i2 < 0) continue;
    if (std::binary_search(f.jump_edges.begin(), f.jump_edges.end(), e)) continue;
    double v1a = f.vals[i1][ed.s0.side];
    double v1b = f.vals[i1][(ed.s0.side + 1) % 3];
    double v2b = f.vals[i2][ed.s1.side];
    double v2a = f.vals[i2][(ed.s1.side + 1) % 3];
    double mm = std::max(std::abs(v1a - v2a), std::abs(v1b - v2b));
    out.worst_mismatch = std::max(out.worst_mismatch, mm);
    double scale = 1.0 + std::max({std::abs(v1a), std::abs(v1b), std::abs(v2a)});
    if (mm > 1e-9 * scale) fail("value discontinuity across a non-jump edge");
  }
  return out;
}

SweepFunction normalize_sweep(SweepFunction f) {
  double mn = f.min_value(), mx = f.max_value();
  double span = mx - mn;
  for (auto& v : f.vals)
    for (int c = 0; c < 3; ++c)
      v[c] = span > 0.0 ? (v[c] - mn) / span : 0.5;
  return f;
}

Cycle1 level_cycle(const ConformalSurface& s, const SweepFunction& f, double t) {
  Cycle1 z;
  for (size_t k = 0; k < f.domain.tris.size(); ++k) {
    int tri = f.domain.tris[k];
    const auto& v = f.vals[k];
    for (int c = 0; c < 3; ++c)
      if (v[c] == t)
        throw std::invalid_argument("level_cycle: level equals a corner value");
    int ends = 0;
    ChordEnd ce[2];
    for (int sd = 0; sd < 3; ++sd) {
      double a = v[sd], b = v[(sd + 1) % 3];
      if ((a <= t) == (b <= t)) continue;
      ce[ends++] = {sd, side_crossing(s.model, s.tris[tri].len[sd], a, b, t)};
    }
    if (ends == 2) z.chords.push_back({tri, ce[0], ce[1]});
  }
  for (int e = 0; e < s.ne(); ++e) {
    const Edge& ed = s.edges[e];
    int i1 = f.domain_index(ed.s0.tri);
    int i2 = ed.boundary() ? -1 : f.domain_index(ed.s1.tri);
    if (i1 < 0 && i2 < 0) continue;
    if (i1 >= 0 && i2 >= 0 &&
        !std::binary_search(f.jump_edges.begin(), f.jump_edges.end(), e))
      continue;
    PInt a, b;
    if (i1 >= 0)
      a = edge_sublevel(s.model, ed.model_len, f.vals[i1][ed.s0.side],
                        f.vals[i1][(ed.s0.side + 1) % 3], t);
    if (i2 >= 0)
      b = edge_sublevel(s.model, ed.model_len, f.vals[i2][(ed.s1.side + 1) % 3],
                        f.vals[i2][ed.s1.side], t);
    double lo[3], hi[3];
    int n = xor_spans(a, b, lo, hi);
    for (int q = 0; q < n; ++q) z.intervals.push_back({e, lo[q], hi[q]});
  }
  z.canonicalize(s);
  return z;
}

// ── width profile ───────────────────────────────────────────────────────────

namespace {

struct TriRec {
  int tri;
  int idx;        // position in domain arrays
  double tmin, tmax;
  double lam_max;
  bool combo;     // endpoint-combination bound is valid for this triangle
};

struct EdgeRec {
  int e;
  bool present1 = false, present2 = false;
  double fa1 = 0, fb1 = 0, fa2 = 0, fb2 = 0;  // values in edge parameters
  bool gamma = false;
  double evmin = 0, evmax = 0;
};

}  // namespace

WidthProfile width_profile(const ConformalSurface& s, const SweepFunction& f) {
  WidthProfile prof;
  size_t nT = f.domain.tris.size();
  if (nT == 0) return prof;

  std::vector<double> ev;
  ev.reserve(nT * 3);
  for (const auto& v : f.vals) {
    ev.push_back(v[0]);
    ev.push_back(v[1]);
    ev.push_back(v[2]);
  }
  std::sort(ev.begin(), ev.end());
  ev.erase(std::unique(ev.begin(), ev.end()), ev.end());
  size_t ni = ev.size() - 1;  // varying intervals; one terminal entry follows

  prof.intervals.assign(ni + 1, WidthInterval{});
  for (size_t i = 0; i < ni; ++i) {
    prof.intervals[i].t0 = ev[i];
    prof.intervals[i].t1 = ev[i + 1];
  }
  prof.intervals[ni].t0 = prof.intervals[ni].t1 = ev.back();

  std::vector<double> const_free(ni + 2, 0.0), const_gamma(ni + 2, 0.0),
      const_bdry(ni + 2, 0.0);
  auto ev_index = [&](double x) {
    return size_t(std::lower_bound(ev.begin(), ev.end(), x) - ev.begin());
  };

  // ── triangle chords ──
  std::vector<TriRec> trecs;
  trecs.reserve(nT);
  for (size_t k = 0; k < nT; ++k) {
    const auto& v = f.vals[k];
    TriRec r;
    r.tri = f.domain.tris[k];
    r.idx = int(k);
    r.tmin = std::min({v[0], v[1], v[2]});
    r.tmax = std::max({v[0], v[1], v[2]});
    const Tri& tt = s.tris[r.tri];
    r.lam_max = std::max({s.lambda[tt.v[0]], s.lambda[tt.v[1]], s.lambda[tt.v[2]]});
    // Spherical distance is jointly convex only while the whole triangle sits
    // well inside a convex ball; past that, fall back to a travel bound.
    r.combo = s.model != Model::Spherical ||
              std::max({tt.len[0], tt.len[1], tt.len[2]}) < 0.5 * kSphereRadius;
    if (r.tmax > r.tmin) trecs.push_back(r);
  }
  std::sort(trecs.begin(), trecs.end(),
            [](const TriRec& a, const TriRec& b) { return a.tmin < b.tmin; });

  // Certified chord bound.  On flat surfaces the summed chord length is
  // convex on each event interval (crossing points move affinely), so the
  // interval supremum of the total is the larger of the two end sums.  On
  // curved models the interval is split into sub-intervals and each triangle
  // contributes a small enclosure: end-combination maxima where the distance
  // is jointly convex (always in the hyperbolic plane, small triangles on the
  // sphere), midpoint plus endpoint travel otherwise.
  constexpr int kSub = 4;
  size_t tp = 0;
  std::vector<size_t> active;
  for (size_t i = 0; i < ni; ++i) {
    double e0 = ev[i], e1 = ev[i + 1], tm = 0.5 * (e0 + e1);
    while (tp < trecs.size() && trecs[tp].tmin <= e0) active.push_back(tp++);
    double acc[2 * kSub + 1] = {0};
    int nacc = s.model == Model::Flat ? 2 : kSub;
    for (size_t a = 0; a < active.size();) {
      const TriRec& r = trecs[active[a]];
      if (r.tmax <= e0) {
        active[a] = active.back();
        active.pop_back();
        continue;
      }
      const auto& v = f.vals[r.idx];
      const Tri& tt = s.tris[r.tri];
      int sides[2];
      int nsides = 0;
      for (int sd = 0; sd < 3; ++sd) {
        double va = v[sd], vb = v[(sd + 1) % 3];
        if ((va <= tm) != (vb <= tm)) sides[nsides++] = sd;
      }
      if (nsides == 2) {
        double um[2];
        for (int q = 0; q < 2; ++q) {
          int sd = sides[q];
          um[q] = side_crossing(s.model, tt.len[sd], v[sd], v[(sd + 1) % 3], tm);
        }
        Vec3 pm0 = s.side_point(r.tri, sides[0], um[0]);
        Vec3 pm1 = s.side_point(r.tri, sides[1], um[1]);
        prof.intervals[i].free_mid += chord_value_integral(
            s.model, s.placed[r.tri][0], s.placed[r.tri][1], s.placed[r.tri][2],
            s.lambda[tt.v[0]], s.lambda[tt.v[1]], s.lambda[tt.v[2]], pm0, pm1);

        if (s.model == Model::Flat) {
          for (int q = 0; q < 2; ++q) {
            double t = q == 0 ? e0 : e1;
            Vec3 pa = s.side_point(
                r.tri, sides[0],
                side_crossing(s.model, tt.len[sides[0]], v[sides[0]],
                              v[(sides[0] + 1) % 3], t));
            Vec3 pb = s.side_point(
                r.tri, sides[1],
                side_crossing(s.model, tt.len[sides[1]], v[sides[1]],
                              v[(sides[1] + 1) % 3], t));
            acc[q] += r.lam_max * point_dist(s.model, pa, pb);
          }
        } else {
          // Crossing params on a 2*kSub+1 grid: sub-interval ends and mids.
          double ug[2][2 * kSub + 1];
          for (int q = 0; q < 2; ++q) {
            int sd = sides[q];
            for (int g = 0; g <= 2 * kSub; ++g) {
              double t = e0 + (e1 - e0) * g / (2.0 * kSub);
              ug[q][g] =
                  side_crossing(s.model, tt.len[sd], v[sd], v[(sd + 1) % 3], t);
            }
          }
          for (int q = 0; q < kSub; ++q) {
            int g0 = 2 * q, g1 = 2 * q + 2, gm = 2 * q + 1;
            double b;
            if (r.combo) {
              b = 0.0;
              for (int qa = 0; qa < 2; ++qa)
                for (int qb = 0; qb < 2; ++qb) {
                  Vec3 pa = s.side_point(r.tri, sides[0],
                                         ug[0][qa == 0 ? g0 : g1]);
                  Vec3 pb = s.side_point(r.tri, sides[1],
                                         ug[1][qb == 0 ? g0 : g1]);
                  b = std::max(b, point_dist(s.model, pa, pb));
                }
            } else {
              Vec3 pa = s.side_point(r.tri, sides[0], ug[0][gm]);
              Vec3 pb = s.side_point(r.tri, sides[1], ug[1][gm]);
              b = point_dist(s.model, pa, pb) +
                  std::abs(ug[0][g1] - ug[0][g0]) * tt.len[sides[0]] +
                  std::abs(ug[1][g1] - ug[1][g0]) * tt.len[sides[1]];
            }
            acc[q] += r.lam_max * b;
          }
        }
      }
      ++a;
    }
    double chord_bound = 0.0;
    for (int q = 0; q < nacc; ++q) chord_bound = std::max(chord_bound, acc[q]);
    prof.intervals[i].free_bound += chord_bound;
  }

  // ── jump and boundary edges ──
  std::vector<EdgeRec> erecs;
  for (int e = 0; e < s.ne(); ++e) {
    const Edge& ed = s.edges[e];
    int i1 = f.domain_index(ed.s0.tri);
    int i2 = ed.boundary() ? -1 : f.domain_index(ed.s1.tri);
    if (i1 < 0 && i2 < 0) continue;
    if (i1 >= 0 && i2 >= 0 &&
        !std::binary_search(f.jump_edges.begin(), f.jump_edges.end(), e))
      continue;
    EdgeRec r;
    r.e = e;
    r.gamma = std::binary_search(f.gamma_edges.begin(), f.gamma_edges.end(), e);
    double mn = std::numeric_limits<double>::infinity(), mx = -mn;
    if (i1 >= 0) {
      r.present1 = true;
      r.fa1 = f.vals[i1][ed.s0.side];
      r.fb1 = f.vals[i1][(ed.s0.side + 1) % 3];
      mn = std::min({mn, r.fa1, r.fb1});
      mx = std::max({mx, r.fa1, r.fb1});
    }
    if (i2 >= 0) {
      r.present2 = true;
      r.fa2 = f.vals[i2][(ed.s1.side + 1) % 3];
      r.fb2 = f.vals[i2][ed.s1.side];
      mn = std::min({mn, r.fa2, r.fb2});
      mx = std::max({mx, r.fa2, r.fb2});
    }
    r.evmin = mn;
    r.evmax = mx;
    // After the last own event a one-sided edge stays fully lit.
    if (!(r.present1 && r.present2)) {
      size_t from = ev_index(mx);
      (r.gamma ? const_gamma : const_bdry)[from] += ed.orig_len;
    }
    if (mx > mn) erecs.push_back(r);
  }
  std::sort(erecs.begin(), erecs.end(),
            [](const EdgeRec& a, const EdgeRec& b) { return a.evmin < b.evmin; });

  size_t ep = 0;
  std::vector<size_t> eactive;
  for (size_t i = 0; i < ni; ++i) {
    double e0 = ev[i], e1 = ev[i + 1], tm = 0.5 * (e0 + e1);
    while (ep < erecs.size() && erecs[ep].evmin <= e0) eactive.push_back(ep++);
    for (size_t a = 0; a < eactive.size();) {
      const EdgeRec& r = erecs[eactive[a]];
      if (r.evmax <= e0) {
        eactive[a] = eactive.back();
        eactive.pop_back();
        continue;
      }
      const Edge& ed = s.edges[r.e];
      auto at = [&](double t, PInt& x, PInt& y) {
        x = r.present1 ? edge_sublevel(s.model, ed.model_len, r.fa1, r.fb1, t)
                       : PInt{};
        y = r.present2 ? edge_sublevel(s.model, ed.model_len, r.fa2, r.fb2, t)
                       : PInt{};
      };
      auto xmeasure = [&](const PInt& x, const PInt& y) {
        double lo[3], hi[3];
        int n = xor_spans(x, y, lo, hi);
        double len = 0.0;
        for (int q = 0; q < n; ++q) len += s.edge_orig_sublength(r.e, lo[q], hi[q]);
        return len;
      };
      PInt x0, y0, x1, y1, xm, ym;
      at(e0, x0, y0);
      at(e1, x1, y1);
      at(tm, xm, ym);
      double measured = xmeasure(xm, ym);
      double grow1 = sub_measure(s, r.e, x1) - sub_measure(s, r.e, x0);
      double grow2 = sub_measure(s, r.e, y1) - sub_measure(s, r.e, y0);
      double bound = std::min(
          std::min(xmeasure(x0, y0), xmeasure(x1, y1)) + grow1 + grow2,
          ed.orig_len);
      WidthInterval& w = prof.intervals[i];
      if (r.gamma) {
        w.gamma_mid += measured;
        w.gamma_bound += bound;
      } else if (r.present1 && r.present2) {
        w.free_mid += measured;
        w.free_bound += bound;
      } else {
        w.bdry_mid += measured;
        w.bdry_bound += bound;
      }
      ++a;
    }
  }

  double acc_free = 0.0, acc_gamma = 0.0, acc_bdry = 0.0;
  for (size_t i = 0; i <= ni; ++i) {
    acc_free += const_free[i];
    acc_gamma += const_gamma[i];
    acc_bdry += const_bdry[i];
    prof.intervals[i].free_mid += acc_free;
    prof.intervals[i].free_bound += acc_free;
    prof.intervals[i].gamma_mid += acc_gamma;
    prof.intervals[i].gamma_bound += acc_gamma;
    prof.intervals[i].bdry_mid += acc_bdry;
    prof.intervals[i].bdry_bound += acc_bdry;
  }
  return prof;
}

double WidthProfile::sup_free_bound() const {
  double m = 0.0;
  for (const auto& w : intervals) m = std::max(m, w.free_bound);
  return m;
}

double WidthProfile::sup_rel_bound() const {
  double m = 0.0;
  for (const auto& w : intervals) m = std::max(m, w.free_bound + w.gamma_bound);
  return m;
}

double WidthProfile::sup_total_bound() const {
  double m = 0.0;
  for (const auto& w : intervals)
    m = std::max(m, w.free_bound + w.gamma_bound + w.bdry_bound);
  return m;
}

double WidthProfile::max_free_measured() const {
  double m = 0.0;
  for (const auto& w : intervals) m = std::max(m, w.free_mid);
  return m;
}

double WidthProfile::max_total_measured() const {
  double m = 0.0;
  for (const auto& w : intervals)
    m = std::max(m, w.free_mid + w.gamma_mid + w.bdry_mid);
  return m;
}

// ── concatenation ───────────────────────────────────────────────────────────

std::vector<int> frontier_edges(const ConformalSurface& s, const Region& a,
                                const Region& b) {
  std::vector<int> out;
  for (int e = 0; e < s.ne(); ++e) {
    const Edge& ed = s.edges[e];
    if (ed.boundary()) continue;
    bool a0 = a.contains(ed.s0.tri), a1 = a.contains(ed.s1.tri);
    bool b0 = b.contains(ed.s0.tri), b1 = b.contains(ed.s1.tri);
    if ((a0 && b1) || (a1 && b0)) out.push_back(e);
  }
  return out;
}

SweepFunction concat_many(const ConformalSurface& s,
                          const std::vector<SweepFunction>& stages) {
  if (stages.empty())
    throw std::invalid_argument("concat_many: no stages");
  int N = int(stages.size());
  std::vector<int> stage_of(s.nt(), -1);
  size_t total = 0;
  for (int i = 0; i < N; ++i) {
    for (int tri : stages[i].domain.tris) {
      if (stage_of[tri] >= 0)
        throw std::invalid_argument("concat_many: stage domains overlap");
      stage_of[tri] = i;
    }
    total += stages[i].domain.tris.size();
  }

  SweepFunction out;
  out.domain.tris.reserve(total);
  for (const auto& st : stages)
    out.domain.tris.insert(out.domain.tris.end(), st.domain.tris.begin(),
                           st.domain.tris.end());
  out.domain.normalize();

  std::vector<std::pair<double, double>> scale(N);  // (min, span)
  for (int i = 0; i < N; ++i) {
    double mn = stages[i].min_value(), mx = stages[i].max_value();
    scale[i] = {mn, mx - mn};
  }
  out.vals.resize(out.domain.tris.size());
  for (int i = 0; i < N; ++i) {
    const auto& st = stages[i];
    for (size_t k = 0; k < st.domain.tris.size(); ++k) {
      int idx = out.domain_index(st.domain.tris[k]);
      for (int c = 0; c < 3; ++c) {
        double u = scale[i].second > 0.0
                       ? (st.vals[k][c] - scale[i].first) / scale[i].second
                       : 0.5;
        out.vals[idx][c] = (i + u) / N;
      }
    }
  }

  std::vector<int> jumps, gammas;
  for (const auto& st : stages) {
    jumps.insert(jumps.end(), st.jump_edges.begin(), st.jump_edges.end());
    gammas.insert(gammas.end(), st.gamma_edges.begin(), st.gamma_edges.end());
  }
  for (int e = 0; e < s.ne(); ++e) {
    const Edge& ed = s.edges[e];
    if (ed.boundary()) continue;
    int sa = stage_of[ed.s0.tri], sb = stage_of[ed.s1.tri];
    if (sa >= 0 && sb >= 0 && sa != sb) {
      jumps.push_back(e);
      gammas.push_back(e);
    }
  }
  std::sort(jumps.begin(), jumps.end());
  jumps.erase(std::unique(jumps.begin(), jumps.end()), jumps.end());
  std::sort(gammas.begin(), gammas.end());
  gammas.erase(std::unique(gammas.begin(), gammas.end()), gammas.end());
  out.jump_edges = std::move(jumps);
  out.gamma_edges = std::move(gammas);
  return out;
}

SweepFunction concat_sweepouts(const ConformalSurface& s,
                               const SweepFunction& first,
                               const SweepFunction& second,
                               const std::vector<int>& gamma) {
  std::vector<int> want = frontier_edges(s, first.domain, second.domain);
  std::vector<int> got = gamma;
  std::sort(got.begin(), got.end());
  if (got != want)
    throw std::invalid_argument(
        "concat_sweepouts: gamma differs from the domain frontier");
  return concat_many(s, {first, second});
}

}  // namespace sweepcert
