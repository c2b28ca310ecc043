#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include <Eigen/Dense>
#include <Eigen/Geometry>

namespace oracle {

bool closed_and_consistently_oriented(const std::vector<std::array<int, 3>>& tris) {
  std::map<std::pair<int, int>, int> directed;
  for (const auto& t : tris) {
    for (int k = 0; k < 3; ++k) ++directed[{t[k], t[(k + 1) % 3]}];
  }
  for (const auto& [e, count] : directed) {
    if (count != 1) return false;
    auto it = directed.find({e.second, e.first});
    if (it == directed.end() || it->second != 1) return false;
  }
  return true;
}

geopart::SurfaceMesh polyhedron(const std::vector<Vec3>& verts,
                                const std::vector<std::vector<int>>& faces) {
  Vec3 centre = Vec3::Zero();
  for (const auto& v : verts) centre += v;
  centre /= static_cast<double>(verts.size());
  std::vector<std::array<int, 3>> tris;
  for (auto f : faces) {
    Vec3 normal = Vec3::Zero();
    Vec3 mid = Vec3::Zero();
    for (std::size_t i = 0; i < f.size(); ++i) {
      normal += verts[f[i]].cross(verts[f[(i + 1) % f.size()]]);
      mid += verts[f[i]];
    }
    mid /= static_cast<double>(f.size());
    if (normal.dot(mid - centre) < 0) std::reverse(f.begin() + 1, f.end());
    for (std::size_t i = 1; i + 1 < f.size(); ++i) tris.push_back({f[0], f[i], f[i + 1]});
  }
  return geopart::SurfaceMesh::build(verts, tris);
}

geopart::SurfaceMesh grid_box(int nx, int ny, double x1, double y1, double depth) {
  std::vector<Vec3> v;
  auto top = [&](int i, int j) { return i + j * (nx + 1); };
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i) v.emplace_back(x1 * i / nx, y1 * j / ny, 0.0);
  const int b00 = static_cast<int>(v.size());
  v.emplace_back(0.0, 0.0, -depth);
  v.emplace_back(x1, 0.0, -depth);
  v.emplace_back(0.0, y1, -depth);
  v.emplace_back(x1, y1, -depth);
  const int b10 = b00 + 1, b01 = b00 + 2, b11 = b00 + 3;
  std::vector<std::vector<int>> faces;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      faces.push_back({top(i, j), top(i + 1, j), top(i + 1, j + 1)});
      faces.push_back({top(i, j), top(i + 1, j + 1), top(i, j + 1)});
    }
  }
  faces.push_back({b00, b01, b11, b10});
  std::vector<int> front{b00, b10}, back{b01, b11}, left{b00, b01}, right{b10, b11};
  for (int i = nx; i >= 0; --i) front.push_back(top(i, 0));
  for (int i = nx; i >= 0; --i) back.push_back(top(i, ny));
  for (int j = ny; j >= 0; --j) left.push_back(top(0, j));
  for (int j = ny; j >= 0; --j) right.push_back(top(nx, j));
  faces.push_back(front);
  faces.push_back(back);
  faces.push_back(left);
  faces.push_back(right);
  return polyhedron(v, faces);
}

geopart::SurfaceMesh two_sided_triangle(const Vec3& a, const Vec3& b, const Vec3& c) {
  return geopart::SurfaceMesh::build({a, b, c}, {{0, 1, 2}, {0, 2, 1}});
}

Eigen::MatrixXd dense_projection(const Eigen::MatrixXd& a, const Eigen::VectorXd& r,
                                 const Eigen::VectorXd& c, const Eigen::VectorXd& v) {
  const int n = static_cast<int>(a.rows());
  const int m = static_cast<int>(a.cols());
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(n + m, n * m);
  Eigen::VectorXd b(n + m);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) C(i, j * n + i) = 1.0;
    b(i) = r(i);
  }
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < n; ++i) C(n + j, j * n + i) = v(i);
    b(n + j) = c(j);
  }
  Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(a.data(), n * m);
  Eigen::MatrixXd cct = C * C.transpose();
  Eigen::VectorXd y = cct.completeOrthogonalDecomposition().solve(C * x - b);
  Eigen::VectorXd out = x - C.transpose() * y;
  return Eigen::Map<Eigen::MatrixXd>(out.data(), n, m);
}

double polygon_area(const std::vector<Vec3>& poly) {
  Vec3 s = Vec3::Zero();
  for (std::size_t i = 0; i < poly.size(); ++i) s += poly[i].cross(poly[(i + 1) % poly.size()]);
  return 0.5 * s.norm();
}

std::vector<Vec3> clip(const std::vector<Vec3>& poly, const Vec3& p, const Vec3& q,
                       const Vec3& keep) {
  const Vec3 normal = (poly[1] - poly[0]).cross(poly[2] - poly[0]);
  auto side = [&](const Vec3& x) { return (q - p).cross(x - p).dot(normal); };
  const double ref = side(keep) > 0 ? 1.0 : -1.0;
  std::vector<Vec3> out;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Vec3& a = poly[i];
    const Vec3& b = poly[(i + 1) % poly.size()];
    const double sa = ref * side(a), sb = ref * side(b);
    if (sa >= 0) out.push_back(a);
    if ((sa >= 0) != (sb >= 0)) out.push_back(a + (b - a) * (sa / (sa - sb)));
  }
  return out;
}

double max_angle(const Vec3& a, const Vec3& b, const Vec3& c) {
  auto ang = [](const Vec3& o, const Vec3& x, const Vec3& y) {
    return std::acos(std::clamp((x - o).normalized().dot((y - o).normalized()), -1.0, 1.0));
  };
  return std::max({ang(a, b, c), ang(b, c, a), ang(c, a, b)});
}

Vec3 geometric_median(const Vec3& a, const Vec3& b, const Vec3& c) {
  const std::array<Vec3, 3> p{a, b, c};
  for (int k = 0; k < 3; ++k) {
    // A vertex is optimal when the unit pulls of the other two sum to at most 1.
    const Vec3 pull = (p[(k + 1) % 3] - p[k]).normalized() + (p[(k + 2) % 3] - p[k]).normalized();
    if (pull.norm() <= 1.0) return p[k];
  }
  Vec3 x = (a + b + c) / 3.0;
  for (int it = 0; it < 20000; ++it) {
    Vec3 num = Vec3::Zero();
    double den = 0.0;
    for (const auto& q : p) {
      const double d = (x - q).norm();
      num += q / d;
      den += 1.0 / d;
    }
    x = num / den;
  }
  return x;
}

std::vector<Vec3> spiral_points(int n) {
  std::vector<Vec3> pts;
  pts.reserve(n);
  const double golden = M_PI * (3.0 - std::sqrt(5.0));
  for (int k = 0; k < n; ++k) {
    const double z = 1.0 - (2.0 * k + 1.0) / n;
    const double r = std::sqrt(1.0 - z * z);
    pts.emplace_back(r * std::cos(golden * k), r * std::sin(golden * k), z);
  }
  return pts;
}

namespace {

double ccw_angle(const Vec3& axis, const Vec3& u, const Vec3& v) {
  double t = std::atan2(axis.dot(u.cross(v)), u.dot(v));
  if (t < 0) t += 2.0 * M_PI;
  return t;
}

}  // namespace

FaceLocator::FaceLocator(const geopart::ArcPartition& p) {
  circles_.resize(p.arcs.size());
  for (auto& c : circles_) c.faces = {-1, -1};
  for (std::size_t f = 0; f < p.faces.size(); ++f) {
    for (const auto& loop : p.faces[f].loops) {
      for (const auto& use : loop) circles_[use.arc].faces[use.reversed ? 1 : 0] = static_cast<int>(f);
    }
  }
  for (std::size_t i = 0; i < p.arcs.size(); ++i) {
    const Vec3& a = p.nodes[p.arcs[i].start];
    const Vec3& m = p.nodes[p.arcs[i].mid];
    const Vec3& b = p.nodes[p.arcs[i].end];
    Circle& c = circles_[i];
    c.axis = (m - a).cross(b - m).normalized();
    c.h = (c.axis.dot(a) + c.axis.dot(m) + c.axis.dot(b)) / 3.0;
    c.p = a;
    c.sweep = a == b ? 2.0 * M_PI : ccw_angle(c.axis, a - c.h * c.axis, b - c.h * c.axis);
  }
  const Circle& c0 = circles_[0];
  const Vec3 m = p.nodes[p.arcs[0].mid];
  const Vec3 t = c0.axis.cross(m).normalized();
  start_ = (m + 1e-6 * m.cross(t)).normalized();
  start_face_ = c0.faces[0];
}

int FaceLocator::locate(const Vec3& x) const {
  const double cx = std::clamp(x.dot(start_), -1.0, 1.0);
  const double T = std::acos(cx);
  if (T < 1e-12) return start_face_;
  const Vec3 w = (x - cx * start_).normalized();
  std::vector<std::pair<double, int>> hits;
  for (std::size_t i = 0; i < circles_.size(); ++i) {
    const Circle& c = circles_[i];
    const double A = c.axis.dot(start_), B = c.axis.dot(w);
    const double R = std::hypot(A, B);
    if (R <= std::abs(c.h)) continue;
    const double base = std::atan2(B, A), d = std::acos(c.h / R);
    for (double t : {base + d, base - d}) {
      t = std::fmod(t, 2.0 * M_PI);
      if (t < 0) t += 2.0 * M_PI;
      if (t <= 0.0 || t >= T) continue;
      const Vec3 z = std::cos(t) * start_ + std::sin(t) * w;
      const double ang = ccw_angle(c.axis, c.p - c.h * c.axis, z - c.h * c.axis);
      if (ang > 0.0 && ang < c.sweep) hits.emplace_back(t, static_cast<int>(i));
    }
  }
  std::sort(hits.begin(), hits.end());
  int face = start_face_;
  for (const auto& [t, arc] : hits) {
    const auto& f = circles_[arc].faces;
    if (face == f[0]) face = f[1];
    else if (face == f[1]) face = f[0];
    else return -1;
  }
  return face;
}

std::vector<double> sampled_areas(const geopart::ArcPartition& p, int samples) {
  FaceLocator loc(p);
  std::vector<double> count(p.faces.size(), 0.0);
  for (const auto& x : spiral_points(samples)) {
    const int f = loc.locate(x);
    if (f >= 0) count[f] += 1.0;
  }
  for (auto& c : count) c *= 4.0 * M_PI / samples;
  return count;
}

geopart::ArcPartition tetrahedral_partition() {
  geopart::ArcPartition p;
  const std::array<Vec3, 4> t{Vec3(1, 1, 1).normalized(), Vec3(1, -1, -1).normalized(),
                              Vec3(-1, 1, -1).normalized(), Vec3(-1, -1, 1).normalized()};
  for (const auto& v : t) {
    p.nodes.push_back(v);
    p.kinds.push_back(geopart::NodeKind::Triple);
  }
  std::map<std::pair<int, int>, int> arc_of;
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      p.nodes.push_back((t[i] + t[j]).normalized());
      p.kinds.push_back(geopart::NodeKind::Midpoint);
      arc_of[{i, j}] = static_cast<int>(p.arcs.size());
      p.arcs.push_back({i, static_cast<int>(p.nodes.size()) - 1, j});
    }
  }
  for (int k = 0; k < 4; ++k) {
    std::vector<int> c;
    for (int i = 0; i < 4; ++i)
      if (i != k) c.push_back(i);
    if ((t[c[1]] - t[c[0]]).cross(t[c[2]] - t[c[0]]).dot(t[c[0]] + t[c[1]] + t[c[2]]) < 0)
      std::swap(c[1], c[2]);
    geopart::Face f;
    f.phase = k;
    f.euler = 1;
    std::vector<geopart::ArcUse> loop;
    for (int s = 0; s < 3; ++s) {
      const int a = c[s], b = c[(s + 1) % 3];
      loop.push_back({arc_of.at({std::min(a, b), std::max(a, b)}), a > b});
    }
    f.loops.push_back(loop);
    p.faces.push_back(f);
  }
  return p;
}

geopart::ArcPartition equator_partition() {
  geopart::ArcPartition p;
  p.nodes = {Vec3(1, 0, 0), Vec3(-1, 0, 0), Vec3(0, 1, 0), Vec3(0, -1, 0)};
  p.kinds = {geopart::NodeKind::Auxiliary, geopart::NodeKind::Auxiliary,
             geopart::NodeKind::Midpoint, geopart::NodeKind::Midpoint};
  p.arcs = {{0, 2, 1}, {1, 3, 0}};
  p.faces.push_back({0, 1, {{{0, false}, {1, false}}}});
  p.faces.push_back({1, 1, {{{1, true}, {0, true}}}});
  return p;
}

Eigen::Matrix3d random_rotation(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Eigen::Quaterniond q(g(rng), g(rng), g(rng), g(rng));
  return q.normalized().toRotationMatrix();
}

geopart::ArcPartition jitter(const geopart::ArcPartition& p, double size, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-size, size);
  geopart::ArcPartition out = p;
  for (auto& x : out.nodes) x = (x + Vec3(u(rng), u(rng), u(rng))).normalized();
  return out;
}

void balance_crossings(geopart::MeshPartitionState& state, const Eigen::MatrixXd& densities) {
  const auto& mesh = state.mesh();
  for (int e : state.active_edges()) {
    const auto& edge = mesh.edges()[e];
    const int a = state.labels()[edge.v[0]], b = state.labels()[edge.v[1]];
    const double d0 = densities(edge.v[0], a) - densities(edge.v[0], b);
    const double d1 = densities(edge.v[1], a) - densities(edge.v[1], b);
    const double t = d0 / (d0 - d1);  // fraction of the way from v0 to v1
    state.lambda()(e) = std::clamp(1.0 - t, 0.0, 1.0);
  }
}

}  // namespace oracle
