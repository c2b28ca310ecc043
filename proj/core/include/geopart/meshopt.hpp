#pragma once

#include <array>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "geopart/contour.hpp"
#include "geopart/mesh.hpp"

namespace geopart {

/// Interface geometry on a fixed triangulation. Every mesh edge carries one
/// parameter; the crossing point of edge (v0, v1) is
/// lambda * x[v0] + (1 - lambda) * x[v1]. Only edges whose endpoints carry
/// different labels are active.
class MeshPartitionState {
 public:
  MeshPartitionState(std::shared_ptr<const SurfaceMesh> mesh, int phases, std::vector<int> labels);

  /// All parameters at 0.5, targets Area/phases.
  static MeshPartitionState from_topology(std::shared_ptr<const SurfaceMesh> mesh,
                                          const PartitionTopology& topology);

  const SurfaceMesh& mesh() const { return *mesh_; }
  std::shared_ptr<const SurfaceMesh> mesh_ptr() const { return mesh_; }
  int phases() const { return phases_; }
  const std::vector<int>& labels() const { return labels_; }
  double target_area() const { return target_area_; }
  double mesh_area() const { return mesh_area_; }

  const Eigen::VectorXd& lambda() const { return lambda_; }
  Eigen::VectorXd& lambda() { return lambda_; }

  const std::vector<int>& active_edges() const { return active_; }
  int active_index(int edge) const { return active_index_[edge]; }

  /// Triangles with exactly three distinct labels.
  const std::vector<int>& void_triangles() const { return voids_; }
  /// Triangles with at least two distinct labels.
  const std::vector<int>& mixed_triangles() const { return mixed_; }
  /// Area of the single-label triangles, per label.
  const std::vector<double>& uniform_area() const { return uniform_area_; }

  Vec3 crossing_point(int edge) const;
  /// Active parameters gathered in active_edges() order.
  Eigen::VectorXd active_parameters() const;
  void set_active_parameters(const Eigen::VectorXd& x);

  /// Relabels vertices and rebuilds the active set. Parameters of edges that
  /// stay active are kept, new active edges start at 0.5.
  void relabel(const std::vector<std::pair<int, int>>& vertex_label_pairs);

 private:
  void rebuild();

  std::shared_ptr<const SurfaceMesh> mesh_;
  int phases_ = 0;
  std::vector<int> labels_;
  Eigen::VectorXd lambda_;
  std::vector<int> active_;
  std::vector<int> active_index_;
  std::vector<int> voids_;
  std::vector<int> mixed_;
  std::vector<double> uniform_area_;
  double mesh_area_ = 0.0;
  double target_area_ = 0.0;
};

/// Value and gradient over all mesh-edge parameters.
struct ScalarWithGradient {
  double value = 0.0;
  Eigen::VectorXd gradient;
};

/// Total interface length counted once, including the Fermat stars of the
/// triple voids. Gradients of plain segments are analytic, the Fermat part
/// uses central differences.
ScalarWithGradient perimeter_with_grad(const MeshPartitionState& state);

/// Flat area owned by `cell`, including its Fermat sub-triangles.
ScalarWithGradient area_with_grad(const MeshPartitionState& state, int cell);

/// Per-cell perimeters; their sum is twice the single-count total.
std::vector<double> cell_perimeters(const MeshPartitionState& state);
std::vector<double> cell_areas(const MeshPartitionState& state);

/// Split of one triple void. Entry k refers to the cell owning the k-th
/// vertex of the mesh triangle.
struct FermatContribution {
  int triangle = -1;
  std::array<int, 3> cells{};
  std::array<Vec3, 3> points{};  // crossing points on edges (v0v1, v1v2, v2v0)
  Vec3 fermat;
  std::array<double, 3> area{};    // sub-triangle (in-point, X, out-point) per cell
  std::array<double, 3> length{};  // |in X| + |X out| - |in out| per cell
  double star_length = 0.0;        // |AX| + |BX| + |CX|
  bool degenerate = false;         // crossing points collinear
  // d area[k] / d lambda of edges (v0v1, v1v2, v2v0), central differences.
  std::array<std::array<double, 3>, 3> area_grad{};
  std::array<std::array<double, 3>, 3> length_grad{};
  std::array<double, 3> star_grad{};
};

FermatContribution fermat_contrib(const MeshPartitionState& state, int triangle);

struct ConstrainedOptions {
  double area_tolerance = 1e-9;  // relative to the mesh area
  double stationarity_tolerance = 1e-8;
  int max_outer = 60;
  int max_inner = 3000;
  int memory = 10;
};

struct ConstrainedResult {
  MeshPartitionState state;
  double initial_perimeter = 0.0;
  double perimeter = 0.0;
  double max_area_residual = 0.0;  // absolute
  double stationarity = 0.0;
  int outer_iterations = 0;
  int inner_iterations = 0;
  bool converged = false;
  std::string message;
};

/// Minimises perimeter_with_grad subject to equal cell areas and
/// 0 <= lambda <= 1 (augmented Lagrangian, bound-projected L-BFGS inside).
ConstrainedResult constrained_minimize(const MeshPartitionState& state,
                                       const ConstrainedOptions& opts = {});

struct SwitchResult {
  MeshPartitionState state;
  bool switched = false;
  std::vector<int> relabeled_vertices;
};

/// Applies the two restart rules: a parameter at 0 or 1 moves its vertex to
/// the neighbouring cell; a Fermat point on the void triangle's boundary moves
/// the junction across that edge.
SwitchResult switch_restart(const MeshPartitionState& state, double tolerance = 1e-6);

struct RefineOptions {
  ConstrainedOptions solver;
  int max_restarts = 50;
  double switch_tolerance = 1e-6;
};

struct RefineReport {
  double single_count_length = 0.0;
  double double_count_length = 0.0;
  double raw_length = 0.0;
  std::vector<double> cell_areas;
  std::vector<double> cell_perimeters;
  double max_area_residual = 0.0;
  int restarts = 0;
  std::vector<double> perimeter_history;  // converged perimeters, non-increasing
  std::string message;
};

struct RefineOutcome {
  MeshPartitionState state;
  RefineReport report;
};

/// optimise -> switch -> optimise until no switch applies, the perimeter stops
/// improving, or max_restarts is reached.
RefineOutcome refine_on_mesh(const MeshPartitionState& initial, const RefineOptions& opts = {});

void write_refine_report(const RefineReport& report, const std::string& path);

/// Interface segments as OBJ line elements.
void write_polylines_obj(const MeshPartitionState& state, const std::string& path);

}  // namespace geopart
