#include "geopart/fermat.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Geometry>

namespace geopart {

namespace {

double angle_at(const Vec3& p, const Vec3& q, const Vec3& r) {
  const Vec3 u = q - p;
  const Vec3 v = r - p;
  return std::atan2(u.cross(v).norm(), u.dot(v));
}

constexpr double kWide = 2.0 * std::numbers::pi / 3.0;

}  // namespace

bool nearly_collinear(const Vec3& a, const Vec3& b, const Vec3& c, double tol) {
  const double scale = std::max({(b - a).squaredNorm(), (c - b).squaredNorm(), (a - c).squaredNorm()});
  return (b - a).cross(c - a).norm() <= tol * scale;
}

Vec3 fermat_point(const Vec3& a, const Vec3& b, const Vec3& c) {
  const double alpha = angle_at(a, b, c);
  const double beta = angle_at(b, c, a);
  const double gamma = angle_at(c, a, b);
  if (alpha >= kWide) return a;
  if (beta >= kWide) return b;
  if (gamma >= kWide) return c;
  // Barycentrics |BC| csc(alpha + pi/3) : |CA| csc(beta + pi/3) : |AB| csc(gamma + pi/3).
  const double third = std::numbers::pi / 3.0;
  const double wa = (b - c).norm() / std::sin(alpha + third);
  const double wb = (c - a).norm() / std::sin(beta + third);
  const double wc = (a - b).norm() / std::sin(gamma + third);
  return (wa * a + wb * b + wc * c) / (wa + wb + wc);
}

Vec3 fermat_point_weiszfeld(const Vec3& a, const Vec3& b, const Vec3& c, int iterations) {
  if (angle_at(a, b, c) >= kWide) return a;
  if (angle_at(b, c, a) >= kWide) return b;
  if (angle_at(c, a, b) >= kWide) return c;
  Vec3 x = (a + b + c) / 3.0;
  for (int it = 0; it < iterations; ++it) {
    const double da = (x - a).norm();
    const double db = (x - b).norm();
    const double dc = (x - c).norm();
    if (da == 0.0 || db == 0.0 || dc == 0.0) break;
    x = (a / da + b / db + c / dc) / (1.0 / da + 1.0 / db + 1.0 / dc);
  }
  return x;
}

}  // namespace geopart
