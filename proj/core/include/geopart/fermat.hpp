#pragma once

#include "geopart/mesh.hpp"

namespace geopart {

/// Point minimising |XA| + |XB| + |XC|, in the plane of the triangle.
/// Closed form (isogonic centre) when every angle is below 120 degrees,
/// otherwise the obtuse vertex.
Vec3 fermat_point(const Vec3& a, const Vec3& b, const Vec3& c);

/// Weiszfeld fixed-point iteration from the centroid, with the 120-degree
/// vertex cutoff. Independent route to the same point.
Vec3 fermat_point_weiszfeld(const Vec3& a, const Vec3& b, const Vec3& c, int iterations = 100);

/// True when the three points are collinear to within `tol` relative area.
bool nearly_collinear(const Vec3& a, const Vec3& b, const Vec3& c, double tol = 1e-12);

}  // namespace geopart
