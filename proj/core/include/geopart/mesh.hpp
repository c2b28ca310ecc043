#pragma once

#include <array>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace geopart {

using Vec3 = Eigen::Vector3d;

/// Thrown when a triangle soup does not form a closed oriented 2-manifold.
class MeshError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Maps a point near the smooth surface back onto it. Used by refinement.
using SurfaceProjector = std::function<Vec3(const Vec3&)>;

struct MeshEdge {
  std::array<int, 2> v;    // v[0] < v[1]
  std::array<int, 2> tri;  // the two incident triangles
};

/// Closed oriented triangle mesh with edge adjacency. Built through
/// SurfaceMesh::build, which validates the manifold invariants; a constructed
/// mesh is never modified afterwards.
class SurfaceMesh {
 public:
  static SurfaceMesh build(std::vector<Vec3> vertices,
                           std::vector<std::array<int, 3>> triangles,
                           SurfaceProjector projector = {});

  const std::vector<Vec3>& vertices() const { return vertices_; }
  const std::vector<std::array<int, 3>>& triangles() const { return triangles_; }
  const std::vector<MeshEdge>& edges() const { return edges_; }

  /// Edge ids of triangle t, ordered (v0v1, v1v2, v2v0).
  const std::array<int, 3>& triangle_edges(int t) const { return triangle_edges_[t]; }

  int vertex_count() const { return static_cast<int>(vertices_.size()); }
  int triangle_count() const { return static_cast<int>(triangles_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }

  int euler_characteristic() const {
    return vertex_count() - edge_count() + triangle_count();
  }

  double triangle_area(int t) const;
  Vec3 triangle_normal(int t) const;  // unit, right-hand rule on vertex order
  double edge_length(int e) const;

  /// Edge id joining a and b, or -1.
  int find_edge(int a, int b) const;

  const SurfaceProjector& projector() const { return projector_; }

 private:
  std::vector<Vec3> vertices_;
  std::vector<std::array<int, 3>> triangles_;
  std::vector<MeshEdge> edges_;
  std::vector<std::array<int, 3>> triangle_edges_;
  std::vector<std::vector<int>> vertex_edges_;
  SurfaceProjector projector_;
};

struct MeshStatistics {
  double area = 0.0;
  double mean_edge_length = 0.0;
  int euler_characteristic = 0;
};

MeshStatistics mesh_statistics(const SurfaceMesh& mesh);

/// Carries P1 vertex values from a coarse mesh to its 1->4 refinement.
/// Fine vertex ids [0, coarse_count) are the coarse vertices; vertex
/// coarse_count + e is the midpoint of coarse edge e.
struct Prolongation {
  int coarse_count = 0;
  std::vector<std::array<int, 2>> edge_parents;

  int fine_count() const { return coarse_count + static_cast<int>(edge_parents.size()); }
  Eigen::MatrixXd apply(const Eigen::MatrixXd& coarse) const;
};

struct Refinement {
  SurfaceMesh mesh;
  Prolongation prolongation;
};

/// 1->4 subdivision. Midpoints are pushed back to the smooth surface when the
/// mesh carries a projector.
Refinement refine(const SurfaceMesh& mesh);

/// Unit icosphere with V = 10 * 4^s + 2.
SurfaceMesh generate_icosphere(int subdivisions);

/// Scalar field whose zero level set is a closed surface inside `lo`..`hi`,
/// negative inside.
struct ImplicitSurface {
  std::string name;
  std::function<double(const Vec3&)> value;
  std::function<Vec3(const Vec3&)> gradient;
  Vec3 lo;
  Vec3 hi;

  /// Newton iteration along the gradient onto {f = 0}.
  Vec3 project(const Vec3& p) const;
};

ImplicitSurface torus_surface(double major_radius = 1.0, double minor_radius = 0.6);
ImplicitSurface double_torus_surface();
ImplicitSurface banchoff_chmutov_surface();

/// Contour the zero level set on a uniform grid with `resolution` cells along
/// the longest bounding-box axis, then project vertices onto the surface.
/// Throws MeshError if the result is not a closed manifold.
SurfaceMesh generate_implicit(const ImplicitSurface& surface, int resolution);

/// Largest |f| over the bounding box grid corners, used to scale residuals.
double implicit_value_scale(const ImplicitSurface& surface);

// OFF interchange.
void write_off(const SurfaceMesh& mesh, const std::string& path);
SurfaceMesh read_off(const std::string& path, SurfaceProjector projector = {});

}  // namespace geopart
