#include "sweepcert/geometry.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace sweepcert {

const char* model_name(Model m) {
  switch (m) {
    case Model::Flat: return "flat";
    case Model::Spherical: return "spherical";
    case Model::Hyperbolic: return "hyperbolic";
  }
  return "?";
}

double edot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

double enorm(const Vec3& v) { return std::sqrt(edot(v, v)); }

double mdot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y - a.z * b.z; }

double model_dot(Model m, const Vec3& a, const Vec3& b) {
  return m == Model::Hyperbolic ? mdot(a, b) : edot(a, b);
}

Vec3 model_origin(Model m) {
  switch (m) {
    case Model::Flat: return {0, 0, 0};
    case Model::Spherical: return {0, 0, kSphereRadius};
    case Model::Hyperbolic: return {0, 0, 1};
  }
  return {};
}

Vec3 normalize_to_model(Model m, const Vec3& p) {
  switch (m) {
    case Model::Flat:
      return {p.x, p.y, 0.0};
    case Model::Spherical: {
      double n = enorm(p);
      return p * (kSphereRadius / n);
    }
    case Model::Hyperbolic: {
      double q = -mdot(p, p);
      return p * (1.0 / std::sqrt(q));
    }
  }
  return p;
}

double acosh1p(double q) {
  if (q <= 0) return 0.0;
  return std::log1p(q + std::sqrt(q * (q + 2.0)));
}

double point_dist(Model m, const Vec3& a, const Vec3& b) {
  switch (m) {
    case Model::Flat:
      return enorm(a - b);
    case Model::Spherical: {
      double half = enorm(a - b) / (2.0 * kSphereRadius);
      half = std::min(half, 1.0);
      return 2.0 * kSphereRadius * std::asin(half);
    }
    case Model::Hyperbolic: {
      Vec3 d = a - b;
      double q = mdot(d, d) / 2.0;
      return acosh1p(std::max(q, 0.0));
    }
  }
  return 0.0;
}

Vec3 point_lerp(Model m, const Vec3& a, const Vec3& b, double t) {
  switch (m) {
    case Model::Flat:
      return a + (b - a) * t;
    case Model::Spherical: {
      double th = point_dist(m, a, b) / kSphereRadius;
      if (th < 1e-14) return normalize_to_model(m, a + (b - a) * t);
      double s = std::sin(th);
      Vec3 p = a * (std::sin((1.0 - t) * th) / s) + b * (std::sin(t * th) / s);
      return normalize_to_model(m, p);
    }
    case Model::Hyperbolic: {
      double d = point_dist(m, a, b);
      if (d < 1e-14) return normalize_to_model(m, a + (b - a) * t);
      double s = std::sinh(d);
      Vec3 p = a * (std::sinh((1.0 - t) * d) / s) + b * (std::sinh(t * d) / s);
      return normalize_to_model(m, p);
    }
  }
  return a;
}

Vec3 tangent_toward(Model m, const Vec3& from, const Vec3& to) {
  switch (m) {
    case Model::Flat: {
      Vec3 u = to - from;
      double n = enorm(u);
      if (n < 1e-300) return {0, 0, 0};
      return u * (1.0 / n);
    }
    case Model::Spherical: {
      Vec3 f = from * (1.0 / kSphereRadius);
      Vec3 u = to - f * edot(to, f);
      double n = enorm(u);
      if (n < 1e-300) return {0, 0, 0};
      return u * (1.0 / n);
    }
    case Model::Hyperbolic: {
      Vec3 u = to + from * mdot(to, from);
      double n2 = mdot(u, u);
      if (n2 < 1e-300) return {0, 0, 0};
      return u * (1.0 / std::sqrt(n2));
    }
  }
  return {};
}

Vec3 geodesic_point(Model m, const Vec3& base, const Vec3& u, double d) {
  switch (m) {
    case Model::Flat:
      return base + u * d;
    case Model::Spherical: {
      double th = d / kSphereRadius;
      return normalize_to_model(m, base * std::cos(th) + u * (kSphereRadius * std::sin(th)));
    }
    case Model::Hyperbolic:
      return normalize_to_model(m, base * std::cosh(d) + u * std::sinh(d));
  }
  return base;
}

double triangle_slack(Model m, double opp, double s1, double s2) {
  double slack = std::min({s1 + s2 - opp, opp + s1 - s2, opp + s2 - s1});
  if (m == Model::Spherical)
    slack = std::min(slack, 2.0 * kPi * kSphereRadius - (opp + s1 + s2));
  return slack;
}

namespace {

// tan(angle/2)^2 = num/den through the model's half-angle identities;
// factors are clamped at zero so degenerate inputs fall to 0 or pi.
void half_angle_parts(Model m, double opp, double s1, double s2, double& num,
                      double& den) {
  double s = 0.5 * (opp + s1 + s2);
  auto f = [&](double v) {
    if (v < 0) v = 0;
    switch (m) {
      case Model::Flat: return v;
      case Model::Spherical: return std::sin(v / kSphereRadius);
      case Model::Hyperbolic: return std::sinh(v);
    }
    return v;
  };
  num = f(s - s1) * f(s - s2);
  den = f(s) * f(s - opp);
}

} // namespace

double tri_angle(Model m, double opp, double s1, double s2) {
  double num = 0, den = 0;
  half_angle_parts(m, opp, s1, s2, num, den);
  if (num <= 0 && den <= 0) return 0.0;
  return 2.0 * std::atan2(std::sqrt(std::max(num, 0.0)), std::sqrt(std::max(den, 0.0)));
}

double tri_area_from_sides(Model m, double l0, double l1, double l2) {
  if (m == Model::Flat) {
    double a = l0, b = l1, c = l2;
    if (a < b) std::swap(a, b);
    if (b < c) std::swap(b, c);
    if (a < b) std::swap(a, b);
    double t = (a + (b + c)) * (c - (a - b)) * (c + (a - b)) * (a + (b - c));
    if (t <= 0) return 0.0;
    return 0.25 * std::sqrt(t);
  }
  double scale = (m == Model::Spherical) ? 1.0 / kSphereRadius : 1.0;
  double a = l0 * scale, b = l1 * scale, c = l2 * scale;
  double s = 0.5 * (a + b + c);
  auto g = [&](double v) {
    if (v < 0) v = 0;
    return (m == Model::Spherical) ? std::tan(v / 2.0) : std::tanh(v / 2.0);
  };
  double prod = g(s) * g(s - a) * g(s - b) * g(s - c);
  if (prod <= 0) return 0.0;
  double e = 4.0 * std::atan(std::sqrt(prod));
  return (m == Model::Spherical) ? e * kSphereRadius * kSphereRadius : e;
}

std::array<Vec3, 3> place_triangle(Model m, double l01, double l12, double l20) {
  double alpha = tri_angle(m, l12, l01, l20);
  Vec3 p0 = model_origin(m);
  Vec3 u1{1, 0, 0};
  Vec3 u2{std::cos(alpha), std::sin(alpha), 0};
  return {p0, geodesic_point(m, p0, u1, l01), geodesic_point(m, p0, u2, l20)};
}

double side_sign(Model m, const Vec3& a, const Vec3& b, const Vec3& c) {
  if (m == Model::Flat) {
    Vec3 u = b - a, v = c - a;
    return u.x * v.y - u.y * v.x;
  }
  return edot(cross(a, b), c);
}

Vec3 unfold_across(Model m, const Vec3& a, const Vec3& b, double la, double lb,
                   const Vec3& opp) {
  double sopp = side_sign(m, a, b, opp);
  double want = (sopp > 0) ? -1.0 : 1.0;
  if (m == Model::Flat) {
    Vec3 e = b - a;
    double dab = enorm(e);
    assert(dab > 0);
    Vec3 eh = e * (1.0 / dab);
    double along = (la * la + dab * dab - lb * lb) / (2.0 * dab);
    double perp2 = la * la - along * along;
    double h = std::sqrt(std::max(perp2, 0.0));
    Vec3 nh{-eh.y, eh.x, 0};
    return a + eh * along + nh * (want * h);
  }
  if (m == Model::Spherical) {
    double R2 = kSphereRadius * kSphereRadius;
    double ca = R2 * std::cos(la / kSphereRadius);
    double cb = R2 * std::cos(lb / kSphereRadius);
    double g = edot(a, b);
    double det = R2 * R2 - g * g;
    double p = (ca * R2 - cb * g) / det;
    double q = (cb * R2 - ca * g) / det;
    Vec3 n = cross(a, b);
    double Q = p * p * R2 + 2.0 * p * q * g + q * q * R2;
    double r2 = (R2 - Q) / edot(n, n);
    double r = want * std::sqrt(std::max(r2, 0.0));
    return normalize_to_model(m, a * p + b * q + n * r);
  }
  double ca = -std::cosh(la);
  double cb = -std::cosh(lb);
  double g = mdot(a, b);
  double det = 1.0 - g * g;
  assert(det < 0);
  double p = -(ca + g * cb) / det;
  double q = -(cb + g * ca) / det;
  Vec3 c3 = cross(a, b);
  Vec3 n{c3.x, c3.y, -c3.z};
  double nn = mdot(n, n);
  double Q = -p * p + 2.0 * p * q * g - q * q;
  double r2 = (-1.0 - Q) / nn;
  double r = want * std::sqrt(std::max(r2, 0.0));
  return normalize_to_model(m, a * p + b * q + n * r);
}

std::array<double, 3> projective_weights(Model m, const Vec3& p0, const Vec3& p1,
                                         const Vec3& p2, const Vec3& x) {
  if (m == Model::Flat) {
    Vec3 u = p1 - p0, v = p2 - p0, w = x - p0;
    double den = u.x * v.y - u.y * v.x;
    double w1 = (w.x * v.y - w.y * v.x) / den;
    double w2 = (u.x * w.y - u.y * w.x) / den;
    return {1.0 - w1 - w2, w1, w2};
  }
  double d0 = edot(cross(x, p1), p2);
  double d1 = edot(cross(p0, x), p2);
  double d2 = edot(cross(p0, p1), x);
  double s = d0 + d1 + d2;
  return {d0 / s, d1 / s, d2 / s};
}

double projective_value(Model m, const Vec3& p0, const Vec3& p1, const Vec3& p2,
                        double f0, double f1, double f2, const Vec3& x) {
  auto w = projective_weights(m, p0, p1, p2, x);
  return w[0] * f0 + w[1] * f1 + w[2] * f2;
}

double edge_crossing_param(Model m, double d, double a, double b) {
  assert(a > 0 && b > 0);
  if (m == Model::Flat || d < 1e-13) return a / (a + b);
  if (m == Model::Hyperbolic) {
    double arg = a * std::sinh(d) / (b + a * std::cosh(d));
    return std::atanh(arg) / d;
  }
  double th = d / kSphereRadius;
  double t = std::atan2(a * std::sin(th), b + a * std::cos(th)) / th;
  return t;
}

double edge_lambda_integral(double la, double lb, double d) {
  return 0.5 * (la + lb) * d;
}

double chord_value_integral(Model m, const Vec3& p0, const Vec3& p1, const Vec3& p2,
                            double f0, double f1, double f2, const Vec3& x,
                            const Vec3& y) {
  double len = point_dist(m, x, y);
  if (len == 0) return 0.0;
  if (m == Model::Flat) {
    double fx = projective_value(m, p0, p1, p2, f0, f1, f2, x);
    double fy = projective_value(m, p0, p1, p2, f0, f1, f2, y);
    return 0.5 * (fx + fy) * len;
  }
  const int panels = 8;
  double sum = 0.0;
  double prev = projective_value(m, p0, p1, p2, f0, f1, f2, x);
  for (int i = 0; i < panels; ++i) {
    double t0 = double(i) / panels, t1 = double(i + 1) / panels;
    Vec3 pm = point_lerp(m, x, y, 0.5 * (t0 + t1));
    Vec3 pe = (i + 1 == panels) ? y : point_lerp(m, x, y, t1);
    double fm = projective_value(m, p0, p1, p2, f0, f1, f2, pm);
    double fe = projective_value(m, p0, p1, p2, f0, f1, f2, pe);
    sum += (prev + 4.0 * fm + fe) / 6.0;
    prev = fe;
  }
  return sum * (len / panels);
}

double geodesic_polygon_area(Model m, const std::vector<Vec3>& pts) {
  if (pts.size() < 3) return 0.0;
  double total = 0.0;
  for (size_t i = 1; i + 1 < pts.size(); ++i) {
    double d0 = point_dist(m, pts[0], pts[i]);
    double d1 = point_dist(m, pts[i], pts[i + 1]);
    double d2 = point_dist(m, pts[0], pts[i + 1]);
    total += tri_area_from_sides(m, d0, d1, d2);
  }
  return total;
}

} // namespace sweepcert
