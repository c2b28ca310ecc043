#include <algorithm>
#include <cmath>
#include <filesystem>
#include <set>

#include "doctest.h"
#include "geopart/mesh.hpp"
#include "oracles.hpp"

using namespace geopart;

namespace {

double total_area(const SurfaceMesh& m) {
  double a = 0.0;
  for (const auto& t : m.triangles()) {
    const auto& v = m.vertices();
    a += 0.5 * (v[t[1]] - v[t[0]]).cross(v[t[2]] - v[t[0]]).norm();
  }
  return a;
}

std::set<std::array<long long, 3>> quantised(const SurfaceMesh& m) {
  std::set<std::array<long long, 3>> s;
  for (const auto& v : m.vertices())
    s.insert({std::llround(v.x() * 1e9), std::llround(v.y() * 1e9), std::llround(v.z() * 1e9)});
  return s;
}

}  // namespace

TEST_CASE("icosahedron counts and orientation") {
  const auto m = generate_icosphere(0);
  CHECK(m.vertex_count() == 12);
  CHECK(m.triangle_count() == 20);
  CHECK(m.euler_characteristic() == 2);
  for (int t = 0; t < m.triangle_count(); ++t) {
    const auto& tri = m.triangles()[t];
    const Vec3 c = (m.vertices()[tri[0]] + m.vertices()[tri[1]] + m.vertices()[tri[2]]) / 3.0;
    CHECK(m.triangle_normal(t).dot(c) > 0.0);
  }
  CHECK(oracle::closed_and_consistently_oriented(m.triangles()));
}

TEST_CASE("icosphere vertex counts") {
  CHECK(generate_icosphere(3).vertex_count() == 642);
  CHECK(generate_icosphere(5).vertex_count() == 10242);
  for (int s = 0; s <= 4; ++s) {
    const auto m = generate_icosphere(s);
    CHECK(m.vertex_count() == 10 * (1 << (2 * s)) + 2);
    CHECK(m.euler_characteristic() == 2);
    for (const auto& v : m.vertices()) CHECK(v.norm() == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("icosphere area converges to 4 pi from below") {
  double prev = 1e9;
  for (int s = 0; s <= 5; ++s) {
    const double err = 4.0 * M_PI - total_area(generate_icosphere(s));
    CHECK(err > 0.0);
    CHECK(err < prev);
    prev = err;
  }
  CHECK(std::abs(total_area(generate_icosphere(3)) - 4 * M_PI) < 0.01 * 4 * M_PI);
  // Inscribed flat triangles lose about 0.12% at s=4 and 0.03% at s=5.
  const auto st = mesh_statistics(generate_icosphere(4));
  CHECK(std::abs(st.area - 4 * M_PI) < 1.5e-3 * 4 * M_PI);
  CHECK(std::abs(total_area(generate_icosphere(5)) - 4 * M_PI) < 1e-3 * 4 * M_PI);
  CHECK(st.area == doctest::Approx(total_area(generate_icosphere(4))).epsilon(1e-13));
  CHECK(st.euler_characteristic == 2);
  CHECK(st.mean_edge_length > 0.0);
}

TEST_CASE("refinement quadruples triangles and keeps the topology") {
  const auto coarse = generate_icosphere(2);
  const auto r = refine(coarse);
  CHECK(r.mesh.triangle_count() == 4 * coarse.triangle_count());
  CHECK(r.mesh.vertex_count() == coarse.vertex_count() + coarse.edge_count());
  CHECK(r.mesh.euler_characteristic() == coarse.euler_characteristic());
  CHECK(oracle::closed_and_consistently_oriented(r.mesh.triangles()));
  CHECK(quantised(r.mesh) == quantised(generate_icosphere(3)));
}

TEST_CASE("prolongation reproduces constants and linear fields") {
  // Flat faces and no projector: midpoints are exact edge midpoints.
  std::vector<Vec3> v{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  const auto tet = oracle::polyhedron(v, {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}});
  const auto r = refine(tet);
  Eigen::MatrixXd coarse(tet.vertex_count(), 2);
  for (int i = 0; i < tet.vertex_count(); ++i) {
    coarse(i, 0) = 1.0;
    coarse(i, 1) = 2.0 * v[i].x() - v[i].y() + 0.5 * v[i].z();
  }
  const Eigen::MatrixXd fine = r.prolongation.apply(coarse);
  REQUIRE(fine.rows() == r.mesh.vertex_count());
  for (int i = 0; i < r.mesh.vertex_count(); ++i) {
    const Vec3& x = r.mesh.vertices()[i];
    CHECK(fine(i, 0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(fine(i, 1) == doctest::Approx(2.0 * x.x() - x.y() + 0.5 * x.z()).epsilon(1e-14));
  }
  CHECK_THROWS_AS(r.prolongation.apply(Eigen::MatrixXd::Zero(3, 1)), std::invalid_argument);
}

TEST_CASE("torus mesh") {
  const auto surf = torus_surface();
  const auto m = generate_implicit(surf, 32);
  CHECK(m.euler_characteristic() == 0);
  const double exact = 4.0 * M_PI * M_PI * 1.0 * 0.6;
  CHECK(std::abs(total_area(m) - exact) < 0.01 * exact);
  const double scale = implicit_value_scale(surf);
  for (const auto& x : m.vertices()) CHECK(std::abs(surf.value(x)) < 1e-8 * scale);
  CHECK(oracle::closed_and_consistently_oriented(m.triangles()));
  // Outward normals: the field grows along them.
  int outward = 0;
  for (int t = 0; t < m.triangle_count(); ++t) {
    const auto& tri = m.triangles()[t];
    const Vec3 c = (m.vertices()[tri[0]] + m.vertices()[tri[1]] + m.vertices()[tri[2]]) / 3.0;
    if (m.triangle_normal(t).dot(surf.gradient(c)) > 0) ++outward;
  }
  CHECK(outward == m.triangle_count());
}

TEST_CASE("double torus and Banchoff-Chmutov meshes") {
  const auto dt = generate_implicit(double_torus_surface(), 24);
  CHECK(dt.euler_characteristic() == -2);
  CHECK(oracle::closed_and_consistently_oriented(dt.triangles()));
  const auto bcs = banchoff_chmutov_surface();
  for (int res : {20, 32}) {
    const auto bc = generate_implicit(bcs, res);
    CHECK(bc.euler_characteristic() == -8);
    CHECK(oracle::closed_and_consistently_oriented(bc.triangles()));
    const double scale = implicit_value_scale(bcs);
    double worst = 0.0;
    for (const auto& x : bc.vertices()) worst = std::max(worst, std::abs(bcs.value(x)));
    CHECK(worst < 1e-8 * scale);
  }
}

TEST_CASE("implicit meshing rejects a coarse grid") {
  CHECK_THROWS(generate_implicit(torus_surface(), 4));
}

TEST_CASE("invalid triangle soups are rejected") {
  const auto m = generate_icosphere(1);
  auto open = m.triangles();
  open.pop_back();
  CHECK_THROWS_AS(SurfaceMesh::build(m.vertices(), open), MeshError);
  auto flipped = m.triangles();
  std::swap(flipped[3][0], flipped[3][1]);
  CHECK_FALSE(oracle::closed_and_consistently_oriented(flipped));
  CHECK_THROWS_AS(SurfaceMesh::build(m.vertices(), flipped), MeshError);
  auto degenerate = m.vertices();
  const auto& t0 = m.triangles()[0];
  degenerate[t0[2]] = 0.5 * (degenerate[t0[0]] + degenerate[t0[1]]);
  CHECK_THROWS_AS(SurfaceMesh::build(degenerate, m.triangles()), MeshError);
  CHECK_THROWS_AS(SurfaceMesh::build({}, {}), MeshError);
}

TEST_CASE("edge adjacency is consistent") {
  const auto m = generate_icosphere(2);
  CHECK(m.edge_count() == 3 * m.triangle_count() / 2);
  for (int t = 0; t < m.triangle_count(); ++t) {
    const auto& tri = m.triangles()[t];
    for (int k = 0; k < 3; ++k) {
      const int e = m.triangle_edges(t)[k];
      const auto& edge = m.edges()[e];
      CHECK(edge.v[0] == std::min(tri[k], tri[(k + 1) % 3]));
      CHECK(edge.v[1] == std::max(tri[k], tri[(k + 1) % 3]));
      CHECK((edge.tri[0] == t || edge.tri[1] == t));
      CHECK(m.find_edge(tri[k], tri[(k + 1) % 3]) == e);
    }
  }
  int far = -1;
  for (int v = 1; v < m.vertex_count() && far < 0; ++v)
    if ((m.vertices()[v] + m.vertices()[0]).norm() < 1e-12) far = v;
  REQUIRE(far > 0);
  CHECK(m.find_edge(0, far) == -1);
}

TEST_CASE("OFF round trip") {
  const auto m = generate_implicit(torus_surface(), 16);
  const auto path = std::filesystem::temp_directory_path() / "geopart_mesh_roundtrip.off";
  write_off(m, path.string());
  const auto back = read_off(path.string());
  REQUIRE(back.vertex_count() == m.vertex_count());
  CHECK(back.triangles() == m.triangles());
  for (int i = 0; i < m.vertex_count(); ++i)
    CHECK((back.vertices()[i] - m.vertices()[i]).norm() < 1e-15);
  std::filesystem::remove(path);
  CHECK_THROWS(read_off((std::filesystem::temp_directory_path() / "geopart_missing.off").string()));
}
