#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>

#include "doctest.h"
#include "geopart/contour.hpp"
#include "geopart/spherearc.hpp"
#include "oracles.hpp"

using namespace geopart;

namespace {

const double kFourPi = 4.0 * M_PI;

// Cap of spherical radius rho about +z and its complement.
ArcPartition cap_partition(double rho) {
  ArcPartition p = oracle::equator_partition();
  const double s = std::sin(rho), c = std::cos(rho);
  p.nodes = {Vec3(s, 0, c), Vec3(-s, 0, c), Vec3(0, s, c), Vec3(0, -s, c)};
  return p;
}

ArcPartition octant_partition() {
  ArcPartition p;
  p.nodes = {Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(0, 0, 1), Vec3(1, 1, 0).normalized(),
             Vec3(0, 1, 1).normalized(), Vec3(1, 0, 1).normalized()};
  p.kinds = {NodeKind::Auxiliary, NodeKind::Auxiliary, NodeKind::Auxiliary,
             NodeKind::Midpoint, NodeKind::Midpoint, NodeKind::Midpoint};
  p.arcs = {{0, 3, 1}, {1, 4, 2}, {2, 5, 0}};
  p.faces.push_back({0, 1, {{{0, false}, {1, false}, {2, false}}}});
  p.faces.push_back({1, 1, {{{2, true}, {1, true}, {0, true}}}});
  return p;
}

PartitionTopology sphere_topology(const SurfaceMesh& m, int phases, bool lunes) {
  PhaseLabeling l;
  l.phases = phases;
  for (const auto& v : m.vertices()) {
    if (lunes) {
      double a = std::atan2(v.y(), v.x()) + 0.1;
      if (a < 0) a += 2 * M_PI;
      l.labels.push_back(std::min(phases - 1, static_cast<int>(a / (2 * M_PI / phases))));
    } else {
      l.labels.push_back(v.z() > 0 ? 0 : 1);
    }
  }
  return extract(l, m);
}

double sum(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

}  // namespace

TEST_CASE("arc geometry on great and small circles") {
  const auto eq = arc_geometry({1, 0, 0}, {0, 1, 0}, {-1, 0, 0});
  CHECK(eq.kg == doctest::Approx(0.0).scale(1.0));
  CHECK(eq.length == doctest::Approx(M_PI).epsilon(1e-14));
  CHECK(eq.sweep == doctest::Approx(M_PI).epsilon(1e-14));
  CHECK((eq.axis - Vec3(0, 0, 1)).norm() < 1e-14);
  CHECK((eq.tangent_start - Vec3(0, 1, 0)).norm() < 1e-14);
  CHECK((eq.tangent_end - Vec3(0, -1, 0)).norm() < 1e-14);

  // Latitude 60 degrees: spherical radius 30 degrees about the pole.
  const double z = std::sqrt(3.0) / 2, r = 0.5;
  const auto lat = arc_geometry({r, 0, z}, {0, r, z}, {-r, 0, z});
  CHECK(lat.kg == doctest::Approx(std::sqrt(3.0)).epsilon(1e-13));
  CHECK(lat.rho == doctest::Approx(M_PI / 6).epsilon(1e-13));
  CHECK(lat.kg_integral == doctest::Approx(lat.kg * lat.length).epsilon(1e-13));
  const auto back = arc_geometry({-r, 0, z}, {0, -r, z}, {r, 0, z});
  CHECK(lat.length + back.length == doctest::Approx(2 * M_PI * std::sin(M_PI / 6)).epsilon(1e-13));

  const auto rev = arc_geometry({r, 0, z}, {0, r, z}, {-r, 0, z}, true);
  CHECK(rev.kg == doctest::Approx(-lat.kg).epsilon(1e-14));
  CHECK(rev.length == doctest::Approx(lat.length).epsilon(1e-14));
  CHECK((rev.tangent_start + lat.tangent_end).norm() < 1e-14);
  CHECK((rev.tangent_end + lat.tangent_start).norm() < 1e-14);
  const auto rr = reverse(lat);
  CHECK(rr.kg == doctest::Approx(rev.kg).epsilon(1e-14));
  CHECK((rr.tangent_start - rev.tangent_start).norm() < 1e-14);

  // A sweep past the half circle.
  const auto big = arc_geometry({1, 0, 0}, {0, -1, 0}, Vec3(1, 1, 0).normalized());
  CHECK(big.sweep == doctest::Approx(2 * M_PI - M_PI / 4).epsilon(1e-13));

  CHECK_THROWS_AS(arc_geometry({1, 0, 0}, {1, 0, 0}, {0, 1, 0}), ArcError);
  CHECK_THROWS_AS(arc_geometry({1, 0, 0}, {-1, 0, 0}, {1, 0, 0}), ArcError);
}

TEST_CASE("turning angle") {
  const Vec3 n(0, 0, 1);
  CHECK(turning_angle(n, {1, 0, 0}, {0, 1, 0}) == doctest::Approx(M_PI / 2));
  CHECK(turning_angle(n, {1, 0, 0}, {0, -1, 0}) == doctest::Approx(-M_PI / 2));
  CHECK(turning_angle(n, {1, 0, 0}, {1, 0, 0}) == doctest::Approx(0.0));
}

TEST_CASE("areas of simple regions") {
  const auto hemi = face_areas(oracle::equator_partition());
  CHECK(hemi[0] == doctest::Approx(2 * M_PI).epsilon(1e-13));
  CHECK(hemi[1] == doctest::Approx(2 * M_PI).epsilon(1e-13));
  CHECK(single_count_length(oracle::equator_partition()) == doctest::Approx(2 * M_PI).epsilon(1e-14));

  const auto oct = face_areas(octant_partition());
  CHECK(oct[0] == doctest::Approx(M_PI / 2).epsilon(1e-13));
  CHECK(oct[1] == doctest::Approx(kFourPi - M_PI / 2).epsilon(1e-13));

  for (double rho : {0.3, 1.0, 2.2}) {
    const auto cap = face_areas(cap_partition(rho));
    const double exact = 2 * M_PI * (1 - std::cos(rho));
    CHECK(cap[0] == doctest::Approx(exact).epsilon(1e-12));
    CHECK(cap[0] + cap[1] == doctest::Approx(kFourPi).epsilon(1e-14));
    std::mt19937_64 rng(static_cast<std::uint64_t>(rho * 1000));
    std::normal_distribution<double> g;
    const int samples = 2000000;
    int inside = 0;
    for (int i = 0; i < samples; ++i) {
      const Vec3 x(g(rng), g(rng), g(rng));
      if (x.z() > std::cos(rho) * x.norm()) ++inside;
    }
    CHECK(std::abs(kFourPi * inside / samples - cap[0]) < 1e-3 * kFourPi);
  }
}

TEST_CASE("regular tetrahedral partition") {
  const auto p = oracle::tetrahedral_partition();
  p.validate();
  CHECK(single_count_length(p) == doctest::Approx(6 * std::acos(-1.0 / 3.0)).epsilon(1e-14));
  CHECK(single_count_length(p) == doctest::Approx(11.4637).epsilon(1e-5));
  for (double a : face_areas(p)) CHECK(a == doctest::Approx(M_PI).epsilon(1e-13));
  CHECK(max_area_difference(face_areas(p)) < 1e-13);
  CHECK(cost(p, 1e-12) == doctest::Approx(2 * single_count_length(p)).epsilon(1e-12));
  for (const auto& t : triple_point_angles(p)) {
    for (double a : t) CHECK(a == doctest::Approx(2 * M_PI / 3).epsilon(1e-13));
  }
}

TEST_CASE("face areas against point sampling") {
  for (std::uint64_t seed : {1, 2, 3}) {
    const auto p = oracle::jitter(oracle::tetrahedral_partition(), 0.15, seed);
    const auto exact = face_areas(p);
    CHECK(sum(exact) == doctest::Approx(kFourPi).epsilon(1e-10));
    CHECK(std::abs(sum(exact) - kFourPi) < 1e-8);
    const auto sampled = oracle::sampled_areas(p, 400000);
    CHECK(sum(sampled) == doctest::Approx(kFourPi).epsilon(1e-12));
    for (std::size_t f = 0; f < exact.size(); ++f) CHECK(std::abs(sampled[f] - exact[f]) < 1e-3 * kFourPi);
  }
}

TEST_CASE("rotation invariance") {
  const auto p = oracle::jitter(oracle::tetrahedral_partition(), 0.1, 7);
  auto q = p;
  const Eigen::Matrix3d R = oracle::random_rotation(5);
  for (auto& x : q.nodes) x = R * x;
  CHECK(std::abs(cost(q, 0.01) - cost(p, 0.01)) < 1e-10 * cost(p, 0.01));
  const auto a = face_areas(p), b = face_areas(q);
  for (std::size_t f = 0; f < a.size(); ++f) CHECK(std::abs(a[f] - b[f]) < 1e-10);
}

TEST_CASE("penalty vanishes for equal areas") {
  const auto p = oracle::equator_partition();
  CHECK(cost(p, 1e-9) == doctest::Approx(4 * M_PI).epsilon(1e-13));
  const auto c = cap_partition(1.0);
  const auto a = face_areas(c);
  CHECK(cost(c, 0.5) == doctest::Approx(2 * single_count_length(c) + (a[0] - a[1]) * (a[0] - a[1]) / 0.5));
}

TEST_CASE("pattern search leaves the regular tetrahedron alone") {
  const auto p = oracle::tetrahedral_partition();
  PatternSearchOptions o;
  o.initial_step = 1e-4;
  const auto r = pattern_search(p, o);
  CHECK(r.cost >= cost(p, r.penalty_eps) - 1e-12);
  CHECK(r.single_count_length == doctest::Approx(6 * std::acos(-1.0 / 3.0)).epsilon(1e-12));
}

TEST_CASE("pattern search recovers the tetrahedral partition") {
  const auto start = oracle::jitter(oracle::tetrahedral_partition(), 0.08, 3);
  const auto r = pattern_search(start, {}, true);
  CHECK(r.reached_area_tolerance);
  CHECK(std::abs(r.single_count_length - 11.4637) < 1e-3);
  CHECK(r.max_area_difference <= 5e-7 * kFourPi);
  CHECK(std::abs(sum(face_areas(r.partition)) - kFourPi) < 1e-8);
  for (const auto& t : triple_point_angles(r.partition)) {
    for (double a : t) CHECK(std::abs(a - 2 * M_PI / 3) < 1e-3);
  }
  // Recentring after each sweep re-evaluates the cost, which may shift it by
  // a few ulps.
  for (const auto& round : r.cost_trace) {
    for (std::size_t k = 1; k < round.size(); ++k) CHECK(round[k] <= round[k - 1] * (1 + 1e-12));
  }
  r.partition.validate();
}

TEST_CASE("lifting mesh partitions") {
  const auto mesh = generate_icosphere(3);

  SUBCASE("three lunes") {
    const auto p = lift_from_mesh(sphere_topology(mesh, 3, true), mesh);
    p.validate();
    CHECK(std::count(p.kinds.begin(), p.kinds.end(), NodeKind::Triple) == 2);
    CHECK(p.arcs.size() == 3);
    CHECK(p.faces.size() == 3);
    CHECK(std::abs(sum(face_areas(p)) - kFourPi) < 1e-8);
    for (double a : face_areas(p)) CHECK(std::abs(a - kFourPi / 3) < 0.05 * kFourPi);
  }

  SUBCASE("two hemispheres") {
    const auto p = lift_from_mesh(sphere_topology(mesh, 2, false), mesh);
    p.validate();
    CHECK(std::count(p.kinds.begin(), p.kinds.end(), NodeKind::Triple) == 0);
    CHECK(p.arcs.size() == 2);
    CHECK(std::abs(sum(face_areas(p)) - kFourPi) < 1e-8);
    CHECK(std::abs(single_count_length(p) - 2 * M_PI) < 0.02 * 2 * M_PI);
  }

  SUBCASE("non-sphere meshes are rejected") {
    const auto torus = generate_implicit(torus_surface(), 16);
    PhaseLabeling l;
    l.phases = 2;
    for (const auto& v : torus.vertices()) l.labels.push_back(v.x() > 0 ? 0 : 1);
    CHECK_THROWS_AS(lift_from_mesh(extract(l, torus), torus), std::invalid_argument);
  }
}

TEST_CASE("validation catches broken partitions") {
  auto p = oracle::tetrahedral_partition();
  p.nodes[0] *= 1.01;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = oracle::tetrahedral_partition();
  p.faces[0].loops[0].pop_back();
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = oracle::tetrahedral_partition();
  p.kinds[0] = NodeKind::Auxiliary;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("midpoint recentring keeps the geometry") {
  const auto p = oracle::jitter(oracle::tetrahedral_partition(), 0.1, 4);
  auto q = p;
  recentre_midpoints(q);
  CHECK(single_count_length(q) == doctest::Approx(single_count_length(p)).epsilon(1e-12));
  const auto a = face_areas(p), b = face_areas(q);
  for (std::size_t f = 0; f < a.size(); ++f) CHECK(a[f] == doctest::Approx(b[f]).epsilon(1e-12));
  for (const auto& arc : q.arcs) {
    const double d0 = (q.nodes[arc.mid] - q.nodes[arc.start]).norm();
    const double d1 = (q.nodes[arc.mid] - q.nodes[arc.end]).norm();
    CHECK(d0 == doctest::Approx(d1).epsilon(1e-12));
  }
}

TEST_CASE("arc file round trip") {
  const auto p = oracle::jitter(oracle::tetrahedral_partition(), 0.1, 9);
  const auto dir = std::filesystem::temp_directory_path() / "geopart_arcs_test";
  std::filesystem::create_directories(dir);
  write_arcs(p, (dir / "arcs.txt").string());
  const auto q = read_arcs((dir / "arcs.txt").string());
  REQUIRE(q.nodes.size() == p.nodes.size());
  for (std::size_t i = 0; i < p.nodes.size(); ++i) {
    CHECK((q.nodes[i] - p.nodes[i]).norm() < 1e-15);
    CHECK(q.kinds[i] == p.kinds[i]);
  }
  REQUIRE(q.faces.size() == p.faces.size());
  for (std::size_t f = 0; f < p.faces.size(); ++f) {
    CHECK(q.faces[f].phase == p.faces[f].phase);
    CHECK(q.faces[f].euler == p.faces[f].euler);
  }
  CHECK(cost(q, 0.1) == cost(p, 0.1));
  write_arc_report(p, (dir / "report.txt").string());
  write_arcs_obj(p, (dir / "arcs.obj").string());
  CHECK(std::filesystem::file_size(dir / "report.txt") > 0);
  CHECK(std::filesystem::file_size(dir / "arcs.obj") > 0);
  std::filesystem::remove_all(dir);
  CHECK_THROWS(read_arcs((dir / "missing.txt").string()));
}
