#include "sweepcert/generators.hpp"

#include <cmath>
#include <map>
#include <random>
#include <stdexcept>

#include "sweepcert/refine.hpp"

namespace sweepcert {

namespace {

void torus_mesh(int n, std::vector<TriSpec>& specs, std::vector<GluingSpec>& glue) {
  if (n < 2) throw std::runtime_error("torus grid must be at least 2x2");
  const double h = 1.0 / n;
  const double diag = std::sqrt(2.0) / n;
  auto vid = [&](int i, int j) { return ((j % n + n) % n) * n + ((i % n + n) % n); };
  auto lower = [&](int i, int j) { return 2 * (vid(i, j)); };
  auto upper = [&](int i, int j) { return 2 * (vid(i, j)) + 1; };

  specs.resize(2 * n * n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      int a = vid(i, j), b = vid(i + 1, j), c = vid(i + 1, j + 1), d = vid(i, j + 1);
      specs[lower(i, j)] = {{a, b, c}, {h, h, diag}};
      specs[upper(i, j)] = {{a, c, d}, {diag, h, h}};
    }
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      glue.push_back({lower(i, j), 2, upper(i, j), 0});
      glue.push_back({lower(i, j), 0, upper(i, j - 1), 1});
      glue.push_back({lower(i, j), 1, upper(i + 1, j), 2});
    }
}

} // namespace

ConformalSurface gen_flat_torus(int n) {
  std::vector<TriSpec> specs;
  std::vector<GluingSpec> glue;
  torus_mesh(n, specs, glue);
  std::vector<double> lambda(n * n, 1.0);
  return build_surface(Model::Flat, std::move(lambda), std::move(specs), glue);
}

ConformalSurface gen_bumpy_torus(int n, double amplitude, std::uint64_t seed) {
  if (!(amplitude >= 0 && amplitude <= 0.3))
    throw std::runtime_error("bump amplitude must lie in [0, 0.3]");
  std::vector<TriSpec> specs;
  std::vector<GluingSpec> glue;
  torus_mesh(n, specs, glue);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coef(0.3, 1.0), phase(0.0, 2 * kPi);
  double c1 = coef(rng), c2 = coef(rng), c3 = coef(rng);
  double p1 = phase(rng), p2 = phase(rng), p3 = phase(rng), p4 = phase(rng);
  std::vector<double> lambda(n * n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      double x = double(i) / n, y = double(j) / n;
      double bump = c1 * std::cos(2 * kPi * x + p1) * std::cos(2 * kPi * y + p2) +
                    c2 * std::cos(4 * kPi * x + p3) + c3 * std::cos(4 * kPi * y + p4);
      lambda[j * n + i] = 1.0 + amplitude * bump / 3.0;
    }
  return build_surface(Model::Flat, std::move(lambda), std::move(specs), glue);
}

ConformalSurface gen_sphere(int subdiv, std::vector<Vec3>* positions) {
  if (subdiv < 0 || subdiv > 8) throw std::runtime_error("sphere subdivision out of range");
  const double ph = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Vec3> pos = {
      {-1, ph, 0}, {1, ph, 0},   {-1, -ph, 0}, {1, -ph, 0},
      {0, -1, ph}, {0, 1, ph},   {0, -1, -ph}, {0, 1, -ph},
      {ph, 0, -1}, {ph, 0, 1},   {-ph, 0, -1}, {-ph, 0, 1},
  };
  for (Vec3& p : pos) p = normalize_to_model(Model::Spherical, p);
  std::vector<std::array<int, 3>> faces = {
      {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
      {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
      {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
      {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1},
  };
  for (auto& f : faces) {
    if (side_sign(Model::Spherical, pos[f[0]], pos[f[1]], pos[f[2]]) < 0)
      std::swap(f[1], f[2]);
  }

  for (int r = 0; r < subdiv; ++r) {
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
      auto key = std::minmax(a, b);
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      int id = (int)pos.size();
      pos.push_back(normalize_to_model(Model::Spherical, pos[a] + pos[b]));
      midpoint.emplace(key, id);
      return id;
    };
    std::vector<std::array<int, 3>> next;
    next.reserve(faces.size() * 4);
    for (auto& f : faces) {
      int m01 = mid(f[0], f[1]), m12 = mid(f[1], f[2]), m20 = mid(f[2], f[0]);
      next.push_back({f[0], m01, m20});
      next.push_back({m01, f[1], m12});
      next.push_back({m20, m12, f[2]});
      next.push_back({m01, m12, m20});
    }
    faces = std::move(next);
  }

  std::vector<TriSpec> specs(faces.size());
  for (size_t t = 0; t < faces.size(); ++t) {
    auto& f = faces[t];
    specs[t].v = {f[0], f[1], f[2]};
    for (int sd = 0; sd < 3; ++sd)
      specs[t].len[sd] = point_dist(Model::Spherical, pos[f[sd]], pos[f[(sd + 1) % 3]]);
  }

  std::map<std::pair<int, int>, SideRef> open_side;
  std::vector<GluingSpec> glue;
  for (int t = 0; t < (int)specs.size(); ++t)
    for (int sd = 0; sd < 3; ++sd) {
      auto key = std::minmax(specs[t].v[sd], specs[t].v[(sd + 1) % 3]);
      auto it = open_side.find(key);
      if (it == open_side.end()) {
        open_side.emplace(key, SideRef{t, sd});
      } else {
        glue.push_back({it->second.tri, it->second.side, t, sd});
        open_side.erase(it);
      }
    }
  if (!open_side.empty()) throw std::runtime_error("sphere mesh failed to close");

  std::vector<double> lambda(pos.size(), 1.0);
  if (positions) *positions = pos;
  return build_surface(Model::Spherical, std::move(lambda), std::move(specs), glue);
}

ConformalSurface gen_bolza(int subdiv) {
  if (subdiv < 0 || subdiv > 7) throw std::runtime_error("octagon subdivision out of range");
  const double spoke = std::acosh(3.0 + 2.0 * std::sqrt(2.0));
  const double side = 2.0 * std::acosh(1.0 + std::sqrt(2.0));

  std::vector<TriSpec> specs(8);
  std::vector<GluingSpec> glue;
  for (int i = 0; i < 8; ++i) specs[i] = {{0, 1, 1}, {spoke, side, spoke}};
  for (int i = 0; i < 8; ++i) {
    glue.push_back({i, 2, (i + 1) % 8, 0});
    if (i < 4) glue.push_back({i, 1, i + 4, 1});
  }
  ConformalSurface s = build_surface(Model::Hyperbolic, {1.0, 1.0}, std::move(specs), glue);
  for (int r = 0; r < subdiv; ++r) s = subdivide4(s).surf;
  return s;
}

} // namespace sweepcert
