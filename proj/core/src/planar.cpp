#include "sweepcert/planar.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>
#include <utility>

namespace sweepcert {

// ── region basics ──────────────────────────────────────────────────────────

double PlanarRegion::area() const {
  double a2 = 0;
  for (const auto& ring : rings) {
    int n = (int)ring.size();
    for (int i = 0; i < n; ++i) {
      const auto& u = ring[i];
      const auto& v = ring[(i + 1) % n];
      a2 += u[0] * v[1] - v[0] * u[1];
    }
  }
  return 0.5 * a2;
}

std::array<double, 4> PlanarRegion::bbox() const {
  double inf = std::numeric_limits<double>::infinity();
  std::array<double, 4> b{inf, inf, -inf, -inf};
  for (const auto& ring : rings)
    for (const auto& v : ring) {
      b[0] = std::min(b[0], v[0]);
      b[1] = std::min(b[1], v[1]);
      b[2] = std::max(b[2], v[0]);
      b[3] = std::max(b[3], v[1]);
    }
  return b;
}

bool PlanarRegion::is_rectilinear(double tol) const {
  for (const auto& ring : rings) {
    int n = (int)ring.size();
    for (int i = 0; i < n; ++i) {
      const auto& u = ring[i];
      const auto& v = ring[(i + 1) % n];
      if (std::abs(u[0] - v[0]) > tol && std::abs(u[1] - v[1]) > tol)
        return false;
    }
  }
  return true;
}

bool PlanarRegion::contains(double x, double y) const {
  bool in = false;
  for (const auto& ring : rings) {
    int n = (int)ring.size();
    for (int i = 0; i < n; ++i) {
      const auto& u = ring[i];
      const auto& v = ring[(i + 1) % n];
      if ((u[1] > y) != (v[1] > y)) {
        double xc = u[0] + (y - u[1]) / (v[1] - u[1]) * (v[0] - u[0]);
        if (xc > x) in = !in;
      }
    }
  }
  return in;
}

// ── line and skeleton measures ─────────────────────────────────────────────

// Sweep along the line, flipping in/out parity at strict crossings.  Vertex
// runs sitting on the line become spans that advance the cursor without
// adding length, so boundary segments lying on the line measure zero, and
// they flip parity only when the ring continues on the opposite side.
double line_measure(const PlanarRegion& p, int axis, double c, double tol) {
  struct Ev {
    double lo, hi;
    bool flip;
  };
  std::vector<Ev> evs;
  int oa = 1 - axis;
  for (const auto& ring : p.rings) {
    int n = (int)ring.size();
    if (n < 3) continue;
    std::vector<int> sd(n);
    bool allz = true;
    for (int i = 0; i < n; ++i) {
      double d = ring[i][axis] - c;
      sd[i] = d > tol ? 1 : d < -tol ? -1 : 0;
      if (sd[i]) allz = false;
    }
    if (allz) continue;
    for (int i = 0; i < n; ++i) {
      int j = (i + 1) % n;
      if (sd[i] * sd[j] != -1) continue;
      double t = (c - ring[i][axis]) / (ring[j][axis] - ring[i][axis]);
      double y = ring[i][oa] + t * (ring[j][oa] - ring[i][oa]);
      evs.push_back({y, y, true});
    }
    for (int i = 0; i < n; ++i) {
      if (sd[i] != 0 || sd[(i + n - 1) % n] == 0) continue;
      double lo = ring[i][oa], hi = lo;
      int k = i;
      while (sd[(k + 1) % n] == 0) {
        k = (k + 1) % n;
        lo = std::min(lo, ring[k][oa]);
        hi = std::max(hi, ring[k][oa]);
      }
      evs.push_back({lo, hi, sd[(i + n - 1) % n] * sd[(k + 1) % n] < 0});
    }
  }
  std::sort(evs.begin(), evs.end(), [](const Ev& a, const Ev& b) {
    return a.lo != b.lo ? a.lo < b.lo : a.hi < b.hi;
  });
  double len = 0, cursor = -std::numeric_limits<double>::infinity();
  int parity = 0;
  for (const Ev& ev : evs) {
    if (ev.lo > cursor) {
      if (parity) len += ev.lo - cursor;
      cursor = ev.lo;
    }
    if (ev.hi > cursor) cursor = ev.hi;
    if (ev.flip) parity ^= 1;
  }
  return len;
}

static double family_length(const PlanarRegion& p, int axis, double cell,
                            double off, double tol) {
  auto bb = p.bbox();
  double lo = bb[axis], hi = bb[axis + 2];
  long m0 = (long)std::ceil((lo - off) / cell - 1e-12);
  long m1 = (long)std::floor((hi - off) / cell + 1e-12);
  double total = 0;
  for (long m = m0; m <= m1; ++m)
    total += line_measure(p, axis, off + (double)m * cell, tol);
  return total;
}

double grid_intersection_length(const PlanarRegion& p, double cell, double ox,
                                double oy) {
  double tol = 1e-9 * cell;
  return family_length(p, 0, cell, ox, tol) +
         family_length(p, 1, cell, oy, tol);
}

GridOffset grid_offset_search(const PlanarRegion& p, double cell) {
  if (!(cell > 0))
    throw std::invalid_argument("grid_offset_search: cell must be positive");
  double tol = 1e-9 * cell;
  GridOffset best;
  for (int axis = 0; axis < 2; ++axis) {
    std::vector<double> cands;
    for (const auto& ring : p.rings)
      for (const auto& v : ring) {
        double b = std::fmod(v[axis], cell);
        if (b < 0) b += cell;
        if (b >= cell) b = 0;
        cands.push_back(b);
      }
    std::sort(cands.begin(), cands.end());
    std::vector<double> uniq;
    for (double c : cands)
      if (uniq.empty() || c - uniq.back() > tol) uniq.push_back(c);
    double bl = std::numeric_limits<double>::infinity(), bo = 0;
    for (double o : uniq) {
      double L = family_length(p, axis, cell, o, tol);
      if (L < bl) {
        bl = L;
        bo = o;
      }
    }
    (axis ? best.oy : best.ox) = bo;
    best.skel_len += bl;
  }
  return best;
}

// ── grid sweepout ──────────────────────────────────────────────────────────

namespace {

// sorted overlay cuts: polygon coordinates plus grid lines inside the bbox
std::vector<double> overlay_cuts(const PlanarRegion& p, int axis, double cell,
                                 double off, double snap) {
  auto bb = p.bbox();
  double lo = bb[axis], hi = bb[axis + 2];
  std::vector<double> v;
  for (const auto& ring : p.rings)
    for (const auto& pt : ring) v.push_back(pt[axis]);
  long m0 = (long)std::ceil((lo - off) / cell - 1e-12);
  long m1 = (long)std::floor((hi - off) / cell + 1e-12);
  for (long m = m0; m <= m1; ++m) {
    double g = off + (double)m * cell;
    if (g > lo + snap && g < hi - snap) v.push_back(g);
  }
  std::sort(v.begin(), v.end());
  std::vector<double> out;
  for (double x : v)
    if (out.empty() || x - out.back() > snap) out.push_back(x);
  return out;
}

double snap_to(const std::vector<double>& cuts, double g, double snap) {
  auto it = std::lower_bound(cuts.begin(), cuts.end(), g);
  double best = g, dist = snap;
  if (it != cuts.end() && *it - g <= dist) {
    best = *it;
    dist = *it - g;
  }
  if (it != cuts.begin() && g - *(it - 1) <= dist) best = *(it - 1);
  return best;
}

} // namespace

GuthSweep guth_sweep(const PlanarRegion& p) {
  return guth_sweep(p, std::sqrt(p.area()));
}

GuthSweep guth_sweep(const PlanarRegion& p, double cell) {
  double A = p.area();
  if (!(A > 0))
    throw std::invalid_argument("guth_sweep: region area must be positive");
  if (!(cell > 0))
    throw std::invalid_argument("guth_sweep: cell must be positive");
  auto bb = p.bbox();
  double scale = std::max(bb[2] - bb[0], bb[3] - bb[1]);
  if (!p.is_rectilinear(1e-9 * scale))
    throw std::invalid_argument("guth_sweep: region must be rectilinear");

  GuthSweep gs;
  gs.cell = cell;
  gs.offset = grid_offset_search(p, cell);
  double snap = 1e-9 * cell;

  std::vector<double> xs = overlay_cuts(p, 0, cell, gs.offset.ox, snap);
  std::vector<double> ys = overlay_cuts(p, 1, cell, gs.offset.oy, snap);
  int nx = (int)xs.size(), ny = (int)ys.size();

  // kept rectangles and their grid cells
  std::vector<int> rect((size_t)(nx - 1) * (ny - 1), -1);
  std::vector<std::array<long, 2>> rcell;
  std::vector<std::array<int, 2>> rij;
  std::set<std::pair<long, long>> cells; // (row J, column I)
  for (int j = 0; j + 1 < ny; ++j)
    for (int i = 0; i + 1 < nx; ++i) {
      double cx = 0.5 * (xs[i] + xs[i + 1]);
      double cy = 0.5 * (ys[j] + ys[j + 1]);
      if (!p.contains(cx, cy)) continue;
      long gi = (long)std::floor((cx - gs.offset.ox) / cell);
      long gj = (long)std::floor((cy - gs.offset.oy) / cell);
      rect[(size_t)j * (nx - 1) + i] = (int)rcell.size();
      rcell.push_back({gi, gj});
      rij.push_back({i, j});
      cells.insert({gj, gi});
    }
  if (rcell.empty())
    throw std::invalid_argument("guth_sweep: no grid cell meets the region");

  // boustrophedon order over nonempty grid cells
  std::map<std::pair<long, long>, std::pair<int, int>> order; // -> {r, dir}
  {
    int r = 0;
    auto it = cells.begin();
    while (it != cells.end()) {
      long row = it->first;
      auto stop = it;
      while (stop != cells.end() && stop->first == row) ++stop;
      int dir = ((row % 2) + 2) % 2 == 0 ? 1 : -1;
      std::vector<std::pair<long, long>> rowc(it, stop);
      if (dir < 0) std::reverse(rowc.begin(), rowc.end());
      for (const auto& c : rowc) order[c] = {r++, dir};
      it = stop;
    }
  }

  // mesh: two triangles per rectangle on the shared x/y cut lattice
  std::vector<int> vid((size_t)nx * ny, -1);
  std::vector<double> lambda;
  auto vertex = [&](int i, int j) {
    int& id = vid[(size_t)j * nx + i];
    if (id < 0) {
      id = (int)lambda.size();
      lambda.push_back(1.0);
    }
    return id;
  };
  std::vector<TriSpec> tris;
  std::vector<GluingSpec> glue;
  std::vector<std::array<int, 2>> tri_of_rect(rcell.size());
  for (int k = 0; k < (int)rcell.size(); ++k) {
    auto [i, j] = rij[k];
    double w = xs[i + 1] - xs[i], h = ys[j + 1] - ys[j];
    double d = std::hypot(w, h);
    int v00 = vertex(i, j), v10 = vertex(i + 1, j);
    int v11 = vertex(i + 1, j + 1), v01 = vertex(i, j + 1);
    int ta = (int)tris.size();
    tris.push_back({{v00, v10, v11}, {w, h, d}});
    tris.push_back({{v00, v11, v01}, {d, w, h}});
    tri_of_rect[k] = {ta, ta + 1};
    glue.push_back({ta, 2, ta + 1, 0});
  }
  auto rect_at = [&](int i, int j) -> int {
    if (i < 0 || j < 0 || i + 1 >= nx || j + 1 >= ny) return -1;
    return rect[(size_t)j * (nx - 1) + i];
  };
  for (int k = 0; k < (int)rcell.size(); ++k) {
    auto [i, j] = rij[k];
    int right = rect_at(i + 1, j);
    if (right >= 0)
      glue.push_back({tri_of_rect[k][0], 1, tri_of_rect[right][1], 2});
    int top = rect_at(i, j + 1);
    if (top >= 0)
      glue.push_back({tri_of_rect[k][1], 1, tri_of_rect[top][0], 0});
  }
  BuildOptions opt;
  opt.require_closed = false;
  opt.validate_angle_sums = false;
  gs.surf = build_surface(Model::Flat, std::move(lambda), std::move(tris),
                          glue, opt);

  // sweep values: per grid cell, linear progress between its x walls
  gs.f.domain = Region::whole(gs.surf);
  gs.f.vals.resize(gs.surf.nt());
  for (int k = 0; k < (int)rcell.size(); ++k) {
    auto [gi, gj] = rcell[k];
    auto [r, dir] = order.at({gj, gi});
    double xl = snap_to(xs, gs.offset.ox + (double)gi * cell, snap);
    double xr = snap_to(xs, gs.offset.ox + (double)(gi + 1) * cell, snap);
    double den = xr - xl;
    auto val = [&](double x) {
      return dir > 0 ? r + (x - xl) / den : r + (xr - x) / den;
    };
    auto [i, j] = rij[k];
    double v0 = val(xs[i]), v1 = val(xs[i + 1]);
    gs.f.vals[tri_of_rect[k][0]] = {v0, v1, v1};
    gs.f.vals[tri_of_rect[k][1]] = {v0, v1, v0};
  }

  // skeleton edges: interior mesh edges where the grid row or column changes
  for (int k = 0; k < (int)rcell.size(); ++k) {
    auto [i, j] = rij[k];
    int top = rect_at(i, j + 1);
    if (top >= 0 && rcell[top][1] != rcell[k][1]) {
      int e = gs.surf.tris[tri_of_rect[k][1]].edge[1];
      gs.f.jump_edges.push_back(e);
      gs.skel_len += gs.surf.edges[e].orig_len;
    }
    int right = rect_at(i + 1, j);
    if (right >= 0 && rcell[right][0] != rcell[k][0])
      gs.skel_len += gs.surf.edges[gs.surf.tris[tri_of_rect[k][0]].edge[1]].orig_len;
  }
  std::sort(gs.f.jump_edges.begin(), gs.f.jump_edges.end());
  gs.f.gamma_edges = gs.f.jump_edges;

  WidthProfile prof = width_profile(gs.surf, gs.f);
  gs.width_free = prof.sup_free_bound();
  gs.width_total = prof.sup_rel_bound();
  return gs;
}

// ── lattice polyominoes ────────────────────────────────────────────────────

PlanarRegion polyomino_region(const std::vector<std::array<int, 2>>& cells,
                              double scale, double tx, double ty) {
  std::set<std::pair<int, int>> s;
  for (const auto& c : cells) s.insert({c[0], c[1]});
  if (s.empty())
    throw std::invalid_argument("polyomino_region: no cells");
  auto has = [&](int x, int y) { return s.count({x, y}) > 0; };

  std::map<std::pair<int, int>, std::vector<std::pair<int, int>>> out;
  for (const auto& [x, y] : s) {
    if (!has(x, y - 1)) out[{x, y}].push_back({1, 0});
    if (!has(x + 1, y)) out[{x + 1, y}].push_back({0, 1});
    if (!has(x, y + 1)) out[{x + 1, y + 1}].push_back({-1, 0});
    if (!has(x - 1, y)) out[{x, y + 1}].push_back({0, -1});
  }
  auto take = [&](std::pair<int, int> at, std::pair<int, int> dir) {
    auto it = out.find(at);
    auto& v = it->second;
    v.erase(std::find(v.begin(), v.end(), dir));
    if (v.empty()) out.erase(it);
  };

  PlanarRegion p;
  while (!out.empty()) {
    std::pair<int, int> start = out.begin()->first;
    std::pair<int, int> dir = out.begin()->second.front();
    take(start, dir);
    std::vector<std::pair<int, int>> pts{start};
    std::pair<int, int> cur{start.first + dir.first, start.second + dir.second};
    while (cur != start) {
      pts.push_back(cur);
      auto it = out.find(cur);
      if (it == out.end())
        throw std::logic_error("polyomino_region: open boundary chain");
      // leftmost turn keeps rings simple at checkerboard corners
      std::pair<int, int> left{-dir.second, dir.first};
      std::pair<int, int> pick{0, 0};
      for (const auto& cand : {left, dir, std::pair<int, int>{dir.second, -dir.first}})
        if (std::find(it->second.begin(), it->second.end(), cand) !=
            it->second.end()) {
          pick = cand;
          break;
        }
      if (pick == std::pair<int, int>{0, 0})
        throw std::logic_error("polyomino_region: dead-end boundary chain");
      take(cur, pick);
      dir = pick;
      cur = {cur.first + dir.first, cur.second + dir.second};
    }
    std::vector<std::array<double, 2>> ring;
    int n = (int)pts.size();
    for (int i = 0; i < n; ++i) {
      auto pr = pts[(i + n - 1) % n], nx = pts[(i + 1) % n];
      if ((pts[i].first - pr.first) * (nx.second - pts[i].second) ==
          (pts[i].second - pr.second) * (nx.first - pts[i].first))
        continue; // collinear
      ring.push_back({tx + scale * pts[i].first, ty + scale * pts[i].second});
    }
    p.rings.push_back(std::move(ring));
  }
  return p;
}

} // namespace sweepcert
