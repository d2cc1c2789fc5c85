#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

namespace sweepcert {

// Constant-curvature background geometries. Flat lives in the z=0 plane,
// Spherical on the round sphere of area 1 (radius 1/(2*sqrt(pi))), and
// Hyperbolic on the unit hyperboloid x^2+y^2-z^2 = -1, z > 0, with the
// Minkowski inner product.
enum class Model : std::uint8_t { Flat = 0, Spherical = 1, Hyperbolic = 2 };

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kSphereRadius = 0.28209479177387814; // 1/(2*sqrt(pi))

const char* model_name(Model m);

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  Vec3() = default;
  Vec3(double px, double py, double pz) : x(px), y(py), z(pz) {}

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  Vec3 operator-() const { return {-x, -y, -z}; }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

double edot(const Vec3& a, const Vec3& b);
Vec3 cross(const Vec3& a, const Vec3& b);
double enorm(const Vec3& v);

// Minkowski inner product with signature (+,+,-).
double mdot(const Vec3& a, const Vec3& b);

// Inner product matching the model's ambient structure.
double model_dot(Model m, const Vec3& a, const Vec3& b);

// Canonical base point: flat origin, sphere north pole, hyperboloid apex.
Vec3 model_origin(Model m);

// Projects a nearby point back onto the model surface (numerical hygiene;
// the identity for Flat).
Vec3 normalize_to_model(Model m, const Vec3& p);

// Geodesic distance between two on-surface points. Stable for close pairs.
double point_dist(Model m, const Vec3& a, const Vec3& b);

// Point at parameter t in [0,1] along the geodesic from a to b.
Vec3 point_lerp(Model m, const Vec3& a, const Vec3& b, double t);

// Unit tangent at `from` pointing along the geodesic toward `to`.
Vec3 tangent_toward(Model m, const Vec3& from, const Vec3& to);

// Exponential map: walks distance d from base along the unit tangent u.
Vec3 geodesic_point(Model m, const Vec3& base, const Vec3& u, double d);

// Positive slack iff side lengths (opp, s1, s2) bound a nondegenerate
// triangle in the model (includes the spherical perimeter cap).
double triangle_slack(Model m, double opp, double s1, double s2);

// Interior angle between the sides of lengths s1 and s2, opposite side opp.
// Computed through half-angle tangents; stable for thin triangles.
double tri_angle(Model m, double opp, double s1, double s2);

// Area of the geodesic triangle with the given side lengths.
// Flat: Kahan-ordered Heron. Curved: excess/defect via the half-excess
// tangent product, stable near degeneracy.
double tri_area_from_sides(Model m, double l0, double l1, double l2);

// Places a triangle with side lengths l01 = |p0 p1|, l12, l20 into model
// coordinates: p0 at the canonical origin, p1 along the first coordinate
// direction, p2 in the upper half (positive orientation).
std::array<Vec3, 3> place_triangle(Model m, double l01, double l12, double l20);

// Orientation of c relative to the oriented geodesic through a, b.
// Positive on the left, negative on the right, zero on the line.
double side_sign(Model m, const Vec3& a, const Vec3& b, const Vec3& c);

// Completes a triangle over the placed edge (a,b): returns the point at
// distance la from a and lb from b lying on the opposite side from `opp`.
Vec3 unfold_across(Model m, const Vec3& a, const Vec3& b, double la, double lb,
                   const Vec3& opp);

// Interpolation weights of x with respect to the placed triangle (p0,p1,p2).
// Flat: affine barycentric. Curved: ambient linear coordinates normalized to
// sum 1 (projective). Level sets of the induced interpolant are geodesic.
std::array<double, 3> projective_weights(Model m, const Vec3& p0, const Vec3& p1,
                                         const Vec3& p2, const Vec3& x);

double projective_value(Model m, const Vec3& p0, const Vec3& p1, const Vec3& p2,
                        double f0, double f1, double f2, const Vec3& x);

// Parameter t in (0,1) where the edge interpolant crosses a threshold.
// a = threshold - f(start) and b = f(end) - threshold must both be > 0;
// d is the edge length. Closed form per model.
double edge_crossing_param(Model m, double d, double a, double b);

// Integral of the edge interpolant of a conformal factor along a geodesic
// edge of model length d with endpoint values la, lb. Exact in every model.
double edge_lambda_integral(double la, double lb, double d);

// Integral of the in-triangle interpolant of (f0,f1,f2) along the chord from
// x to y inside the placed triangle. Exact for Flat; Simpson on curved
// models (the integrand is smooth and the chord is short).
double chord_value_integral(Model m, const Vec3& p0, const Vec3& p1,
                            const Vec3& p2, double f0, double f1, double f2,
                            const Vec3& x, const Vec3& y);

// Model area of the geodesic polygon with the given boundary vertices
// (fan triangulation from the first vertex; intended for convex pieces).
double geodesic_polygon_area(Model m, const std::vector<Vec3>& pts);

// acosh(1+q) for q >= 0 without cancellation.
double acosh1p(double q);

} // namespace sweepcert
