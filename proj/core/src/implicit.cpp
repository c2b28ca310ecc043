#include <algorithm>
#include <cmath>
#include <cstdint>
#include <unordered_map>

#include <Eigen/Geometry>

#include "geopart/mesh.hpp"

namespace geopart {

Vec3 ImplicitSurface::project(const Vec3& p) const {
  Vec3 x = p;
  for (int it = 0; it < 60; ++it) {
    const double f = value(x);
    const Vec3 g = gradient(x);
    const double g2 = g.squaredNorm();
    if (g2 == 0.0) break;
    const Vec3 step = (f / g2) * g;
    x -= step;
    if (step.norm() < 1e-16 * (1.0 + x.norm())) break;
  }
  return x;
}

ImplicitSurface torus_surface(double major_radius, double minor_radius) {
  const double R = major_radius;
  const double r = minor_radius;
  ImplicitSurface s;
  s.name = "torus";
  s.value = [R, r](const Vec3& p) {
    const double q = p.squaredNorm() + R * R - r * r;
    return q * q - 4.0 * R * R * (p.x() * p.x() + p.y() * p.y());
  };
  s.gradient = [R, r](const Vec3& p) {
    const double q = p.squaredNorm() + R * R - r * r;
    return Vec3(4.0 * q * p.x() - 8.0 * R * R * p.x(), 4.0 * q * p.y() - 8.0 * R * R * p.y(),
                4.0 * q * p.z());
  };
  const double ext = R + r + 0.1;
  s.lo = Vec3(-ext, -ext, -r - 0.1);
  s.hi = Vec3(ext, ext, r + 0.1);
  return s;
}

ImplicitSurface double_torus_surface() {
  ImplicitSurface s;
  s.name = "double-torus";
  // g(x) = x (x-1)^2 (x-2); f = (g + y^2)^2 + z^2 - 0.03
  s.value = [](const Vec3& p) {
    const double x = p.x();
    const double g = x * (x - 1) * (x - 1) * (x - 2);
    const double h = g + p.y() * p.y();
    return h * h + p.z() * p.z() - 0.03;
  };
  s.gradient = [](const Vec3& p) {
    const double x = p.x();
    const double g = x * (x - 1) * (x - 1) * (x - 2);
    const double dg = (x - 1) * (x - 1) * (x - 2) + 2 * x * (x - 1) * (x - 2) + x * (x - 1) * (x - 1);
    const double h = g + p.y() * p.y();
    return Vec3(2 * h * dg, 4 * h * p.y(), 2 * p.z());
  };
  s.lo = Vec3(-0.25, -0.8, -0.25);
  s.hi = Vec3(2.25, 0.8, 0.25);
  return s;
}

ImplicitSurface banchoff_chmutov_surface() {
  ImplicitSurface s;
  s.name = "bc4";
  auto t4 = [](double x) { return 8 * x * x * x * x - 8 * x * x + 1; };
  auto dt4 = [](double x) { return 32 * x * x * x - 16 * x; };
  s.value = [t4](const Vec3& p) { return t4(p.x()) + t4(p.y()) + t4(p.z()); };
  s.gradient = [dt4](const Vec3& p) { return Vec3(dt4(p.x()), dt4(p.y()), dt4(p.z())); };
  s.lo = Vec3::Constant(-1.15);
  s.hi = Vec3::Constant(1.15);
  return s;
}

double implicit_value_scale(const ImplicitSurface& surface) {
  double scale = 0.0;
  for (int c = 0; c < 8; ++c) {
    const Vec3 p((c & 1) ? surface.hi.x() : surface.lo.x(), (c & 2) ? surface.hi.y() : surface.lo.y(),
                 (c & 4) ? surface.hi.z() : surface.lo.z());
    scale = std::max(scale, std::abs(surface.value(p)));
  }
  return scale;
}

namespace {

struct Grid {
  Vec3 origin;
  double h = 0.0;
  std::array<int, 3> cells{};

  int point_id(int i, int j, int k) const {
    return i + (cells[0] + 1) * (j + (cells[1] + 1) * k);
  }
  Vec3 point(int i, int j, int k) const { return origin + h * Vec3(i, j, k); }
};

// Freudenthal (Kuhn) split of the unit cube into six tetrahedra sharing the
// 0-7 diagonal. Corner index bits are (x, y, z). Neighbouring cubes agree on
// their shared face diagonals, so the tetrahedral complex is conforming.
constexpr std::array<std::array<int, 4>, 6> kKuhnTets = {{
    {0, 1, 3, 7}, {0, 1, 5, 7}, {0, 2, 3, 7},
    {0, 2, 6, 7}, {0, 4, 5, 7}, {0, 4, 6, 7},
}};

struct Contourer {
  const Grid& grid;
  const std::vector<double>& values;
  const std::vector<Vec3>& points;
  std::unordered_map<std::int64_t, int> edge_vertex;
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::int64_t npoints;

  int vertex_on(int a, int b) {
    const std::int64_t key = static_cast<std::int64_t>(std::min(a, b)) * npoints + std::max(a, b);
    auto it = edge_vertex.find(key);
    if (it != edge_vertex.end()) return it->second;
    const double fa = values[a];
    const double fb = values[b];
    const double t = fa / (fa - fb);
    vertices.push_back(points[a] + t * (points[b] - points[a]));
    const int id = static_cast<int>(vertices.size()) - 1;
    edge_vertex.emplace(key, id);
    return id;
  }

  // Orient (pa-pb, pc-pd, pe-pf) so its normal points from the inside
  // vertices toward the outside ones. The orientation test uses tet-edge
  // midpoints, which share the combinatorial orientation of the actual
  // interpolated triangle but never degenerate.
  void emit(std::array<std::array<int, 2>, 3> e, const Vec3& outward) {
    auto mid = [&](const std::array<int, 2>& ab) { return 0.5 * (points[ab[0]] + points[ab[1]]); };
    const Vec3 n = (mid(e[1]) - mid(e[0])).cross(mid(e[2]) - mid(e[0]));
    if (n.dot(outward) < 0) std::swap(e[1], e[2]);
    triangles.push_back({vertex_on(e[0][0], e[0][1]), vertex_on(e[1][0], e[1][1]),
                         vertex_on(e[2][0], e[2][1])});
  }

  void tetrahedron(const std::array<int, 4>& g) {
    std::array<int, 4> in{}, out{};
    int nin = 0, nout = 0;
    for (int k = 0; k < 4; ++k) {
      if (values[g[k]] < 0)
        in[nin++] = g[k];
      else
        out[nout++] = g[k];
    }
    if (nin == 0 || nout == 0) return;
    Vec3 cin = Vec3::Zero(), cout = Vec3::Zero();
    for (int k = 0; k < nin; ++k) cin += points[in[k]] / nin;
    for (int k = 0; k < nout; ++k) cout += points[out[k]] / nout;
    const Vec3 outward = cout - cin;
    if (nin == 1) {
      emit({{{in[0], out[0]}, {in[0], out[1]}, {in[0], out[2]}}}, outward);
    } else if (nout == 1) {
      emit({{{out[0], in[0]}, {out[0], in[1]}, {out[0], in[2]}}}, outward);
    } else {
      const int a = in[0], b = in[1], c = out[0], d = out[1];
      emit({{{a, c}, {a, d}, {b, d}}}, outward);
      emit({{{a, c}, {b, d}, {b, c}}}, outward);
    }
  }
};

std::vector<std::vector<int>> vertex_neighbours(int nv, const std::vector<std::array<int, 3>>& tris) {
  std::vector<std::vector<int>> nbr(nv);
  for (const auto& t : tris) {
    for (int k = 0; k < 3; ++k) {
      nbr[t[k]].push_back(t[(k + 1) % 3]);
      nbr[t[k]].push_back(t[(k + 2) % 3]);
    }
  }
  for (auto& n : nbr) {
    std::sort(n.begin(), n.end());
    n.erase(std::unique(n.begin(), n.end()), n.end());
  }
  return nbr;
}

}  // namespace

SurfaceMesh generate_implicit(const ImplicitSurface& surface, int resolution) {
  if (resolution < 16) throw std::invalid_argument("implicit meshing needs resolution >= 16");

  const Vec3 extent = surface.hi - surface.lo;
  Grid grid;
  grid.h = extent.maxCoeff() / resolution;
  // Irrational offset keeps grid samples off exact zeros of polynomial fields.
  grid.origin = surface.lo - grid.h * Vec3(0.1234567891, 0.2718281828, 0.1414213562);
  for (int a = 0; a < 3; ++a) grid.cells[a] = static_cast<int>(std::ceil(extent[a] / grid.h)) + 1;

  const int np = (grid.cells[0] + 1) * (grid.cells[1] + 1) * (grid.cells[2] + 1);
  std::vector<Vec3> points(np);
  std::vector<double> values(np);
  for (int k = 0; k <= grid.cells[2]; ++k)
    for (int j = 0; j <= grid.cells[1]; ++j)
      for (int i = 0; i <= grid.cells[0]; ++i) {
        const int id = grid.point_id(i, j, k);
        points[id] = grid.point(i, j, k);
        values[id] = surface.value(points[id]);
        if (values[id] == 0.0) values[id] = 1e-300;
      }

  Contourer c{grid, values, points, {}, {}, {}, np};
  for (int k = 0; k < grid.cells[2]; ++k)
    for (int j = 0; j < grid.cells[1]; ++j)
      for (int i = 0; i < grid.cells[0]; ++i) {
        std::array<int, 8> corner{};
        for (int b = 0; b < 8; ++b)
          corner[b] = grid.point_id(i + (b & 1), j + ((b >> 1) & 1), k + ((b >> 2) & 1));
        for (const auto& tet : kKuhnTets)
          c.tetrahedron({corner[tet[0]], corner[tet[1]], corner[tet[2]], corner[tet[3]]});
      }
  if (c.triangles.empty()) throw MeshError(surface.name + ": zero level set not found on the grid");

  std::vector<Vec3> verts = std::move(c.vertices);
  for (auto& p : verts) p = surface.project(p);

  // Tangential relaxation to spread out the slivers that tetrahedral
  // contouring leaves near grid points.
  const auto nbr = vertex_neighbours(static_cast<int>(verts.size()), c.triangles);
  std::vector<Vec3> next(verts.size());
  for (int sweep = 0; sweep < 8; ++sweep) {
    for (std::size_t v = 0; v < verts.size(); ++v) {
      Vec3 avg = Vec3::Zero();
      for (int w : nbr[v]) avg += verts[w];
      avg /= static_cast<double>(nbr[v].size());
      Vec3 n = surface.gradient(verts[v]);
      const double nn = n.norm();
      Vec3 d = avg - verts[v];
      if (nn > 0) {
        n /= nn;
        d -= d.dot(n) * n;
      }
      next[v] = surface.project(verts[v] + 0.5 * d);
    }
    std::swap(verts, next);
  }

  const double scale = implicit_value_scale(surface);
  for (std::size_t v = 0; v < verts.size(); ++v) {
    if (!(std::abs(surface.value(verts[v])) < 1e-10 * scale))
      throw MeshError(surface.name + ": vertex " + std::to_string(v) +
                      " did not converge onto the level set");
  }
  for (std::size_t t = 0; t < c.triangles.size(); ++t) {
    const auto& tri = c.triangles[t];
    const Vec3 n = (verts[tri[1]] - verts[tri[0]]).cross(verts[tri[2]] - verts[tri[0]]);
    const Vec3 centroid = (verts[tri[0]] + verts[tri[1]] + verts[tri[2]]) / 3.0;
    if (n.dot(surface.gradient(centroid)) <= 0)
      throw MeshError(surface.name + ": triangle " + std::to_string(t) +
                      " folded during relaxation; increase the resolution");
  }

  SurfaceProjector proj = [surface](const Vec3& p) { return surface.project(p); };
  try {
    return SurfaceMesh::build(std::move(verts), std::move(c.triangles), std::move(proj));
  } catch (const MeshError& e) {
    throw MeshError(surface.name + " at resolution " + std::to_string(resolution) + ": " + e.what());
  }
}

}  // namespace geopart
