#pragma once

#include "katolab/flat_torus.hpp"
#include "katolab/manifold.hpp"

#include <array>

namespace katolab {

struct FlatTorus {
  DiscreteManifold mesh;
  AnalyticFlatTorus analytic;
};

/// Periodic quad-split grid with `resolution` cells per axis and the exact
/// flat metric. The analytic twin shares the periods; its mode cutoff is the
/// largest one the grid resolves.
FlatTorus build_flat_torus(std::array<double, 2> periods, int resolution);

/// Icosahedron refined `subdivisions` times and projected to the sphere.
DiscreteManifold build_sphere(double radius, int subdivisions);

/// Standard embedded torus ((R + r cos v) cos u, (R + r cos v) sin u, r sin v)
/// with `resolution` segments around the major circle and a proportional count
/// around the minor one. Carries K = cos v / (r (R + r cos v)) as reference curvature.
DiscreteManifold build_torus_of_revolution(double R, double r, int resolution);

} // namespace katolab
