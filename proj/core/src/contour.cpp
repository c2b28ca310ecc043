#include "geopart/contour.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "geopart/fermat.hpp"

namespace geopart {

Eigen::VectorXd PhaseLabeling::indicator(int phase) const {
  Eigen::VectorXd v(static_cast<Eigen::Index>(labels.size()));
  for (std::size_t i = 0; i < labels.size(); ++i) v[static_cast<Eigen::Index>(i)] = labels[i] == phase;
  return v;
}

PhaseLabeling label(const Eigen::MatrixXd& densities) {
  PhaseLabeling out;
  out.phases = static_cast<int>(densities.cols());
  out.labels.resize(densities.rows());
  for (Eigen::Index i = 0; i < densities.rows(); ++i) {
    int best = 0;
    for (Eigen::Index j = 1; j < densities.cols(); ++j) {
      if (densities(i, j) > densities(i, best)) best = static_cast<int>(j);
    }
    out.labels[i] = best;
  }
  return out;
}

namespace {

int distinct(int a, int b, int c) { return 1 + (b != a) + (c != a && c != b); }

}  // namespace

PartitionTopology extract(const PhaseLabeling& labeling, const SurfaceMesh& mesh) {
  const auto& lab = labeling.labels;
  if (static_cast<int>(lab.size()) != mesh.vertex_count())
    throw std::invalid_argument("labeling does not match the mesh");
  for (int l : lab) {
    if (l < 0 || l >= labeling.phases) throw std::invalid_argument("label out of range");
  }

  // Labels seen in each vertex umbrella.
  std::vector<std::vector<int>> umbrella(mesh.vertex_count());
  for (const auto& t : mesh.triangles()) {
    for (int k = 0; k < 3; ++k)
      for (int m = 0; m < 3; ++m) umbrella[t[k]].push_back(lab[t[m]]);
  }
  for (int v = 0; v < mesh.vertex_count(); ++v) {
    auto& u = umbrella[v];
    std::sort(u.begin(), u.end());
    u.erase(std::unique(u.begin(), u.end()), u.end());
    if (u.size() >= 4)
      throw UnresolvableJunction("unresolvable junction: " + std::to_string(u.size()) +
                                 " phases meet around vertex " + std::to_string(v));
  }

  PartitionTopology topo;
  topo.phases = labeling.phases;
  topo.labels = lab;
  topo.cells.resize(labeling.phases);
  for (int i = 0; i < labeling.phases; ++i) topo.cells[i].phase = i;

  std::set<std::pair<int, int>> adjacency;
  for (int e = 0; e < mesh.edge_count(); ++e) {
    const auto& v = mesh.edges()[e].v;
    if (lab[v[0]] != lab[v[1]]) {
      topo.boundary_edges.push_back(e);
      adjacency.emplace(std::min(lab[v[0]], lab[v[1]]), std::max(lab[v[0]], lab[v[1]]));
    }
  }
  topo.adjacency.assign(adjacency.begin(), adjacency.end());

  // Per cell: crossing edge -> (next crossing edge, triangle in between).
  std::vector<std::map<int, std::pair<int, int>>> next(labeling.phases);
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const auto& tri = mesh.triangles()[t];
    const auto& te = mesh.triangle_edges(t);
    const int nd = distinct(lab[tri[0]], lab[tri[1]], lab[tri[2]]);
    if (nd == 1) continue;
    if (nd == 3) topo.voids.push_back({t, {lab[tri[0]], lab[tri[1]], lab[tri[2]]}});
    // Each maximal run of equal labels (cyclically) owns one piece; its
    // boundary leaves through the edge after the run and re-enters through
    // the edge before it.
    for (int s = 0; s < 3; ++s) {
      const int c = lab[tri[s]];
      if (lab[tri[(s + 2) % 3]] == c) continue;  // not the start of a run
      int e = s;
      while (lab[tri[(e + 1) % 3]] == c) e = (e + 1) % 3;
      const int out_edge = te[e];
      const int in_edge = te[(s + 2) % 3];
      next[c][out_edge] = {in_edge, t};
    }
  }

  for (int c = 0; c < labeling.phases; ++c) {
    std::set<int> visited;
    for (const auto& [start, unused] : next[c]) {
      if (visited.count(start)) continue;
      BoundaryLoop loop;
      int e = start;
      do {
        visited.insert(e);
        auto it = next[c].find(e);
        if (it == next[c].end()) throw std::logic_error("open boundary chain");
        loop.edges.push_back(e);
        loop.triangles.push_back(it->second.second);
        e = it->second.first;
      } while (e != start);
      topo.cells[c].loops.push_back(std::move(loop));
    }
  }
  return topo;
}

double raw_perimeter(const PartitionTopology& topology, const SurfaceMesh& mesh) {
  const auto& lab = topology.labels;
  auto mid = [&](int e) {
    const auto& v = mesh.edges()[e].v;
    return Vec3(0.5 * (mesh.vertices()[v[0]] + mesh.vertices()[v[1]]));
  };
  double total = 0.0;
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const auto& tri = mesh.triangles()[t];
    const auto& te = mesh.triangle_edges(t);
    const int nd = distinct(lab[tri[0]], lab[tri[1]], lab[tri[2]]);
    if (nd == 2) {
      std::array<int, 2> cut{};
      int k = 0;
      for (int m = 0; m < 3; ++m) {
        if (lab[tri[m]] != lab[tri[(m + 1) % 3]]) cut[k++] = te[m];
      }
      total += (mid(cut[0]) - mid(cut[1])).norm();
    } else if (nd == 3) {
      const Vec3 a = mid(te[0]), b = mid(te[1]), c = mid(te[2]);
      const Vec3 x = fermat_point(a, b, c);
      total += (a - x).norm() + (b - x).norm() + (c - x).norm();
    }
  }
  return total;
}

std::vector<int> label_components(const PhaseLabeling& labeling, const SurfaceMesh& mesh) {
  std::vector<int> parent(labeling.labels.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& e : mesh.edges()) {
    if (labeling.labels[e.v[0]] == labeling.labels[e.v[1]]) parent[find(e.v[0])] = find(e.v[1]);
  }
  std::vector<int> count(labeling.phases, 0);
  for (std::size_t v = 0; v < parent.size(); ++v) {
    if (find(static_cast<int>(v)) == static_cast<int>(v)) ++count[labeling.labels[v]];
  }
  return count;
}

void write_topology(const PartitionTopology& topo, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << "TOPOLOGY 1\nphases " << topo.phases << "\nlabels " << topo.labels.size() << '\n';
  for (std::size_t i = 0; i < topo.labels.size(); ++i)
    out << topo.labels[i] << ((i + 1) % 32 == 0 || i + 1 == topo.labels.size() ? '\n' : ' ');
  out << "boundary_edges " << topo.boundary_edges.size() << '\n';
  for (std::size_t i = 0; i < topo.boundary_edges.size(); ++i)
    out << topo.boundary_edges[i]
        << ((i + 1) % 32 == 0 || i + 1 == topo.boundary_edges.size() ? '\n' : ' ');
  out << "adjacency " << topo.adjacency.size() << '\n';
  for (const auto& [a, b] : topo.adjacency) out << a << ' ' << b << '\n';
  out << "voids " << topo.voids.size() << '\n';
  for (const auto& v : topo.voids)
    out << v.triangle << ' ' << v.labels[0] << ' ' << v.labels[1] << ' ' << v.labels[2] << '\n';
  for (const auto& cell : topo.cells) {
    out << "cell " << cell.phase << ' ' << cell.loops.size() << '\n';
    for (const auto& loop : cell.loops) {
      out << "loop " << loop.edges.size();
      for (std::size_t k = 0; k < loop.edges.size(); ++k)
        out << ' ' << loop.edges[k] << ':' << loop.triangles[k];
      out << '\n';
    }
  }
}

PartitionTopology read_topology(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  auto expect = [&](const char* word) {
    std::string tok;
    if (!(in >> tok) || tok != word)
      throw std::runtime_error(path + ": expected '" + word + "', found '" + tok + "'");
  };
  PartitionTopology topo;
  int version = 0;
  std::size_t count = 0;
  expect("TOPOLOGY");
  in >> version;
  expect("phases");
  in >> topo.phases;
  expect("labels");
  in >> count;
  topo.labels.resize(count);
  for (auto& l : topo.labels) in >> l;
  expect("boundary_edges");
  in >> count;
  topo.boundary_edges.resize(count);
  for (auto& e : topo.boundary_edges) in >> e;
  expect("adjacency");
  in >> count;
  topo.adjacency.resize(count);
  for (auto& [a, b] : topo.adjacency) in >> a >> b;
  expect("voids");
  in >> count;
  topo.voids.resize(count);
  for (auto& v : topo.voids) in >> v.triangle >> v.labels[0] >> v.labels[1] >> v.labels[2];
  topo.cells.resize(topo.phases);
  for (int c = 0; c < topo.phases; ++c) {
    std::size_t loops = 0;
    expect("cell");
    in >> topo.cells[c].phase >> loops;
    topo.cells[c].loops.resize(loops);
    for (auto& loop : topo.cells[c].loops) {
      expect("loop");
      in >> count;
      loop.edges.resize(count);
      loop.triangles.resize(count);
      for (std::size_t k = 0; k < count; ++k) {
        char colon = 0;
        in >> loop.edges[k] >> colon >> loop.triangles[k];
        if (colon != ':') throw std::runtime_error(path + ": malformed loop entry");
      }
    }
  }
  if (!in) throw std::runtime_error(path + ": truncated topology file");
  return topo;
}

}  // namespace geopart
