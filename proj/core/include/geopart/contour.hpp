#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "geopart/mesh.hpp"

namespace geopart {

/// Per-vertex argmax phase (0-based). Ties go to the lowest phase index.
struct PhaseLabeling {
  int phases = 0;
  std::vector<int> labels;

  /// Indicator of phase i evaluated at every vertex (0/1).
  Eigen::VectorXd indicator(int phase) const;
};

PhaseLabeling label(const Eigen::MatrixXd& densities);

/// A closed boundary curve of one cell. The curve crosses edges[k], then runs
/// through triangles[k] to edges[(k+1) % size]. The cell lies to the left.
struct BoundaryLoop {
  std::vector<int> edges;
  std::vector<int> triangles;
};

struct CellBoundary {
  int phase = 0;
  std::vector<BoundaryLoop> loops;
};

/// Mesh triangle whose three vertices carry three different labels; a small
/// region with no owner is left inside it.
struct TripleVoid {
  int triangle = -1;
  std::array<int, 3> labels{};  // in the triangle's vertex order
};

struct PartitionTopology {
  int phases = 0;
  std::vector<int> labels;          // per vertex
  std::vector<int> boundary_edges;  // edges whose endpoints carry different labels
  std::vector<CellBoundary> cells;  // one entry per phase
  std::vector<TripleVoid> voids;
  std::vector<std::pair<int, int>> adjacency;  // sorted cell pairs sharing a boundary edge
};

/// Four or more labels meet around a single vertex.
class UnresolvableJunction : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Classifies triangles by their number of distinct labels and chains the
/// crossing segments into closed loops per cell.
PartitionTopology extract(const PhaseLabeling& labeling, const SurfaceMesh& mesh);

/// Total interface length (each interface once) with every crossing point at
/// its edge midpoint; triple voids contribute the Fermat star of their three
/// midpoints.
double raw_perimeter(const PartitionTopology& topology, const SurfaceMesh& mesh);

/// Number of connected components of each phase's vertex set.
std::vector<int> label_components(const PhaseLabeling& labeling, const SurfaceMesh& mesh);

void write_topology(const PartitionTopology& topology, const std::string& path);
PartitionTopology read_topology(const std::string& path);

}  // namespace geopart
