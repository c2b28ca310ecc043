#include "geopart/mesh.hpp"

#include <cmath>
#include <cstdint>
#include <unordered_map>

#include <Eigen/Geometry>

namespace geopart {

namespace {

std::int64_t edge_key(int a, int b, int n) {
  if (a > b) std::swap(a, b);
  return static_cast<std::int64_t>(a) * n + b;
}

}  // namespace

SurfaceMesh SurfaceMesh::build(std::vector<Vec3> vertices,
                               std::vector<std::array<int, 3>> triangles,
                               SurfaceProjector projector) {
  SurfaceMesh m;
  m.vertices_ = std::move(vertices);
  m.triangles_ = std::move(triangles);
  m.projector_ = std::move(projector);

  const int nv = m.vertex_count();
  const int nt = m.triangle_count();
  if (nv == 0 || nt == 0) throw MeshError("empty mesh");

  m.triangle_edges_.resize(nt);
  m.vertex_edges_.assign(nv, {});
  std::unordered_map<std::int64_t, int> lookup;
  lookup.reserve(static_cast<std::size_t>(nt) * 3 / 2 + 1);
  // Directed-edge count, to check orientation consistency.
  std::unordered_map<std::int64_t, int> directed;
  directed.reserve(static_cast<std::size_t>(nt) * 3);

  for (int t = 0; t < nt; ++t) {
    const auto& tri = m.triangles_[t];
    for (int k = 0; k < 3; ++k) {
      const int a = tri[k];
      const int b = tri[(k + 1) % 3];
      if (a < 0 || a >= nv || b < 0 || b >= nv || a == b)
        throw MeshError("triangle " + std::to_string(t) + " has invalid vertex indices");
      const std::int64_t dkey = static_cast<std::int64_t>(a) * nv + b;
      if (++directed[dkey] > 1)
        throw MeshError("inconsistent orientation or non-manifold edge (" + std::to_string(a) +
                        "," + std::to_string(b) + ")");
      const std::int64_t key = edge_key(a, b, nv);
      auto it = lookup.find(key);
      if (it == lookup.end()) {
        const int id = static_cast<int>(m.edges_.size());
        lookup.emplace(key, id);
        m.edges_.push_back(MeshEdge{{std::min(a, b), std::max(a, b)}, {t, -1}});
        m.vertex_edges_[a].push_back(id);
        m.vertex_edges_[b].push_back(id);
        m.triangle_edges_[t][k] = id;
      } else {
        auto& e = m.edges_[it->second];
        if (e.tri[1] != -1)
          throw MeshError("edge (" + std::to_string(a) + "," + std::to_string(b) +
                          ") has more than two incident triangles");
        e.tri[1] = t;
        m.triangle_edges_[t][k] = it->second;
      }
    }
  }
  for (const auto& e : m.edges_) {
    if (e.tri[1] == -1)
      throw MeshError("boundary edge (" + std::to_string(e.v[0]) + "," + std::to_string(e.v[1]) +
                      "): surface is not closed");
  }

  double total = 0.0;
  for (int t = 0; t < nt; ++t) total += m.triangle_area(t);
  const double floor = 1e-14 * total / nt;
  for (int t = 0; t < nt; ++t) {
    if (!(m.triangle_area(t) > floor))
      throw MeshError("degenerate triangle " + std::to_string(t));
  }
  return m;
}

double SurfaceMesh::triangle_area(int t) const {
  const auto& tri = triangles_[t];
  return 0.5 * (vertices_[tri[1]] - vertices_[tri[0]])
                   .cross(vertices_[tri[2]] - vertices_[tri[0]])
                   .norm();
}

Vec3 SurfaceMesh::triangle_normal(int t) const {
  const auto& tri = triangles_[t];
  return (vertices_[tri[1]] - vertices_[tri[0]])
      .cross(vertices_[tri[2]] - vertices_[tri[0]])
      .normalized();
}

double SurfaceMesh::edge_length(int e) const {
  return (vertices_[edges_[e].v[0]] - vertices_[edges_[e].v[1]]).norm();
}

int SurfaceMesh::find_edge(int a, int b) const {
  for (int e : vertex_edges_[a]) {
    if (edges_[e].v[0] == b || edges_[e].v[1] == b) return e;
  }
  return -1;
}

MeshStatistics mesh_statistics(const SurfaceMesh& mesh) {
  MeshStatistics s;
  for (int t = 0; t < mesh.triangle_count(); ++t) s.area += mesh.triangle_area(t);
  double len = 0.0;
  for (int e = 0; e < mesh.edge_count(); ++e) len += mesh.edge_length(e);
  s.mean_edge_length = len / mesh.edge_count();
  s.euler_characteristic = mesh.euler_characteristic();
  return s;
}

Eigen::MatrixXd Prolongation::apply(const Eigen::MatrixXd& coarse) const {
  if (coarse.rows() != coarse_count)
    throw std::invalid_argument("prolongation: row count does not match the coarse mesh");
  Eigen::MatrixXd fine(fine_count(), coarse.cols());
  fine.topRows(coarse_count) = coarse;
  for (std::size_t e = 0; e < edge_parents.size(); ++e) {
    fine.row(coarse_count + static_cast<int>(e)) =
        0.5 * (coarse.row(edge_parents[e][0]) + coarse.row(edge_parents[e][1]));
  }
  return fine;
}

Refinement refine(const SurfaceMesh& mesh) {
  const int nv = mesh.vertex_count();
  std::vector<Vec3> verts = mesh.vertices();
  verts.reserve(nv + mesh.edge_count());
  Prolongation pro;
  pro.coarse_count = nv;
  pro.edge_parents.reserve(mesh.edge_count());
  for (const auto& e : mesh.edges()) {
    Vec3 mid = 0.5 * (mesh.vertices()[e.v[0]] + mesh.vertices()[e.v[1]]);
    if (mesh.projector()) mid = mesh.projector()(mid);
    verts.push_back(mid);
    pro.edge_parents.push_back(e.v);
  }

  std::vector<std::array<int, 3>> tris;
  tris.reserve(4 * mesh.triangle_count());
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const auto& v = mesh.triangles()[t];
    const auto& te = mesh.triangle_edges(t);
    const int m01 = nv + te[0];
    const int m12 = nv + te[1];
    const int m20 = nv + te[2];
    tris.push_back({v[0], m01, m20});
    tris.push_back({v[1], m12, m01});
    tris.push_back({v[2], m20, m12});
    tris.push_back({m01, m12, m20});
  }
  return Refinement{SurfaceMesh::build(std::move(verts), std::move(tris), mesh.projector()),
                    std::move(pro)};
}

SurfaceMesh generate_icosphere(int subdivisions) {
  if (subdivisions < 0 || subdivisions > 8)
    throw std::invalid_argument("icosphere subdivisions must be in [0, 8]");
  const double phi = 0.5 * (1.0 + std::sqrt(5.0));
  std::vector<Vec3> v = {
      {-1, phi, 0}, {1, phi, 0}, {-1, -phi, 0}, {1, -phi, 0},
      {0, -1, phi}, {0, 1, phi}, {0, -1, -phi}, {0, 1, -phi},
      {phi, 0, -1}, {phi, 0, 1}, {-phi, 0, -1}, {-phi, 0, 1},
  };
  for (auto& p : v) p.normalize();
  std::vector<std::array<int, 3>> f = {
      {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
      {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
      {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
      {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1},
  };
  SurfaceProjector onto_sphere = [](const Vec3& p) -> Vec3 { return p.normalized(); };
  SurfaceMesh mesh = SurfaceMesh::build(std::move(v), std::move(f), onto_sphere);
  for (int s = 0; s < subdivisions; ++s) mesh = refine(mesh).mesh;
  return mesh;
}

}  // namespace geopart
