#include "geopart/fem.hpp"

#include <fstream>
#include <iomanip>
#include <vector>

#include <Eigen/Geometry>

namespace geopart {

namespace {

void require_nondegenerate(const SurfaceMesh& mesh, int t, double area) {
  if (!(area > 0.0)) throw MeshError("degenerate triangle " + std::to_string(t) + " in assembly");
}

}  // namespace

SparseMatrix assemble_mass(const SurfaceMesh& mesh) {
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(9 * static_cast<std::size_t>(mesh.triangle_count()));
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const double area = mesh.triangle_area(t);
    require_nondegenerate(mesh, t, area);
    const auto& tri = mesh.triangles()[t];
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) trip.emplace_back(tri[a], tri[b], a == b ? area / 6.0 : area / 12.0);
  }
  SparseMatrix m(mesh.vertex_count(), mesh.vertex_count());
  m.setFromTriplets(trip.begin(), trip.end());
  return m;
}

SparseMatrix assemble_stiffness(const SurfaceMesh& mesh) {
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(9 * static_cast<std::size_t>(mesh.triangle_count()));
  const auto& x = mesh.vertices();
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const auto& tri = mesh.triangles()[t];
    // e[k] is the edge opposite vertex k; grad(phi_k) = n x e[k] / (2 area).
    const std::array<Vec3, 3> e = {x[tri[2]] - x[tri[1]], x[tri[0]] - x[tri[2]],
                                   x[tri[1]] - x[tri[0]]};
    const double area = 0.5 * e[2].cross(-e[1]).norm();
    require_nondegenerate(mesh, t, area);
    for (int a = 0; a < 3; ++a) {
      double row = 0.0;
      for (int b = 0; b < 3; ++b) {
        if (a == b) continue;
        const double kab = e[a].dot(e[b]) / (4.0 * area);
        trip.emplace_back(tri[a], tri[b], kab);
        row += kab;
      }
      // Diagonal as minus the row sum keeps K*1 = 0 to rounding.
      trip.emplace_back(tri[a], tri[a], -row);
    }
  }
  SparseMatrix k(mesh.vertex_count(), mesh.vertex_count());
  k.setFromTriplets(trip.begin(), trip.end());
  return k;
}

Eigen::VectorXd lumped_weights(const SparseMatrix& mass) {
  return mass * Eigen::VectorXd::Ones(mass.cols());
}

void write_coordinate(const SparseMatrix& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << std::setprecision(17);
  for (int k = 0; k < m.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(m, k); it; ++it)
      out << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
}

}  // namespace geopart
