#include <memory>
#include <random>

#include <benchmark/benchmark.h>

#include "geopart/contour.hpp"
#include "geopart/fem.hpp"
#include "geopart/meshopt.hpp"
#include "geopart/relax.hpp"
#include "geopart/spherearc.hpp"

using namespace geopart;

namespace {

Eigen::MatrixXd random_matrix(int rows, int cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::MatrixXd m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) m(i, j) = u(rng);
  return m;
}

std::vector<int> voronoi_labels(const SurfaceMesh& m, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::vector<Vec3> sites;
  for (int i = 0; i < count; ++i) sites.push_back(Vec3(g(rng), g(rng), g(rng)).normalized());
  std::vector<int> lab;
  for (const auto& v : m.vertices()) {
    int best = 0;
    for (int i = 1; i < count; ++i)
      if ((v - sites[i]).squaredNorm() < (v - sites[best]).squaredNorm()) best = i;
    lab.push_back(best);
  }
  return lab;
}

// Random Voronoi labeling whose junctions are all triple.
PartitionTopology voronoi_topology(const SurfaceMesh& m, int count) {
  for (std::uint64_t seed = 1;; ++seed) {
    PhaseLabeling l;
    l.phases = count;
    l.labels = voronoi_labels(m, count, seed);
    try {
      return extract(l, m);
    } catch (const UnresolvableJunction&) {
    }
  }
}

}  // namespace

static void BM_EnergyGradient(benchmark::State& state) {
  const auto mesh = generate_icosphere(static_cast<int>(state.range(0)));
  const auto ops = LevelOperators::assemble(mesh);
  const Eigen::MatrixXd u = random_init(mesh.vertex_count(), 6, 1, ops.weights, ops.area);
  const EnergyParams p{mesh_statistics(mesh).mean_edge_length, 1.0, default_starget(6)};
  Eigen::MatrixXd g;
  for (auto _ : state) benchmark::DoNotOptimize(energy_and_gradient(u, ops, p, g));
  state.counters["vertices"] = mesh.vertex_count();
}
BENCHMARK(BM_EnergyGradient)->Arg(4)->Arg(5)->Arg(6)->Unit(benchmark::kMillisecond);

static void BM_ProjectPartition(benchmark::State& state) {
  const auto mesh = generate_icosphere(static_cast<int>(state.range(0)));
  const auto ops = LevelOperators::assemble(mesh);
  const Eigen::MatrixXd a = random_matrix(mesh.vertex_count(), 6, 2);
  for (auto _ : state) benchmark::DoNotOptimize(project_partition(a, ops.weights, ops.area));
}
BENCHMARK(BM_ProjectPartition)->Arg(4)->Arg(6)->Unit(benchmark::kMicrosecond);

static void BM_AssembleOperators(benchmark::State& state) {
  const auto mesh = generate_icosphere(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(LevelOperators::assemble(mesh));
}
BENCHMARK(BM_AssembleOperators)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

static void BM_ArcCost(benchmark::State& state) {
  const auto mesh = generate_icosphere(4);
  const int n = static_cast<int>(state.range(0));
  const auto part = lift_from_mesh(voronoi_topology(mesh, n), mesh);
  for (auto _ : state) benchmark::DoNotOptimize(cost(part, 1e-3));
  state.counters["arcs"] = static_cast<double>(part.arcs.size());
}
BENCHMARK(BM_ArcCost)->Arg(4)->Arg(12)->Unit(benchmark::kMicrosecond);

static void BM_MeshInterfaceEvaluation(benchmark::State& state) {
  auto mesh = std::make_shared<SurfaceMesh>(generate_icosphere(static_cast<int>(state.range(0))));
  const auto s = MeshPartitionState::from_topology(mesh, voronoi_topology(*mesh, 6));
  for (auto _ : state) {
    benchmark::DoNotOptimize(perimeter_with_grad(s));
    for (int c = 0; c < 6; ++c) benchmark::DoNotOptimize(area_with_grad(s, c));
  }
  state.counters["active_edges"] = static_cast<double>(s.active_edges().size());
}
BENCHMARK(BM_MeshInterfaceEvaluation)->Arg(4)->Arg(6)->Unit(benchmark::kMicrosecond);
BENCHMARK_MAIN();
