#pragma once

#include <cstdint>
#include <vector>

#include "sweepcert/surface.hpp"

namespace sweepcert {

// Unit-area square torus subdivided into an n x n grid, two triangles per
// cell. Flat model, lambda = 1.
ConformalSurface gen_flat_torus(int n);

// Same mesh with a smooth positive conformal bump field (seeded).
ConformalSurface gen_bumpy_torus(int n, double amplitude, std::uint64_t seed);

// Unit-area round sphere, icosahedron subdivided `subdiv` times along
// geodesics. 20 * 4^subdiv triangles. `positions` (optional) receives the
// ambient vertex coordinates, indexed by vertex id.
ConformalSurface gen_sphere(int subdiv, std::vector<Vec3>* positions = nullptr);

// Genus-2 hyperbolic surface from the regular octagon (area 4*pi), as a fan
// of 8 triangles around the center, then `subdiv` rounds of midpoint
// subdivision.
ConformalSurface gen_bolza(int subdiv);

} // namespace sweepcert
