#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "geopart/contour.hpp"
#include "geopart/mesh.hpp"

namespace geopart {

/// Triple points have degree 3. Auxiliary nodes have degree 2 and split
/// closed interfaces. Midpoints fix the circle of their arc.
enum class NodeKind { Triple, Auxiliary, Midpoint };

struct Arc {
  int start = -1;
  int mid = -1;
  int end = -1;
};

struct ArcUse {
  int arc = -1;
  bool reversed = false;
};

struct Face {
  int phase = 0;
  /// Euler characteristic of the region; 1 for a disc.
  int euler = 1;
  std::vector<std::vector<ArcUse>> loops;  // region on the left
};

/// A partition of the unit sphere into regions bounded by circle arcs.
struct ArcPartition {
  std::vector<Vec3> nodes;
  std::vector<NodeKind> kinds;
  std::vector<Arc> arcs;
  std::vector<Face> faces;

  int phases() const { return static_cast<int>(faces.size()); }
  /// Throws std::invalid_argument describing the first broken invariant.
  void validate() const;
};

class ArcError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ArcGeometry {
  Vec3 axis;           // the arc runs counter-clockwise about it
  double rho = 0.0;    // spherical radius in (0, pi/2]
  double height = 0.0; // axis . p, cos of the radius about `axis`
  double sweep = 0.0;  // angle travelled about the axis, (0, 2 pi)
  double length = 0.0;
  double kg = 0.0;           // signed geodesic curvature
  double kg_integral = 0.0;  // kg * length
  Vec3 tangent_start;
  Vec3 tangent_end;
};

/// The circle arc from p through m to q. With `reversed` it is traversed from
/// q to p: tangents swap and flip and the curvature changes sign.
ArcGeometry arc_geometry(const Vec3& p, const Vec3& m, const Vec3& q, bool reversed = false);

ArcGeometry reverse(const ArcGeometry& g);

/// Signed exterior angle at a corner P turning from t_in to t_out.
double turning_angle(const Vec3& corner, const Vec3& t_in, const Vec3& t_out);

double face_area(const ArcPartition& partition, int face);
std::vector<double> face_areas(const ArcPartition& partition);

/// Interface length, each arc once.
double single_count_length(const ArcPartition& partition);

/// 2 * single count + sum over face pairs (A_i - A_j)^2 / eps.
double cost(const ArcPartition& partition, double eps);

double max_area_difference(const std::vector<double>& areas);

/// The three angles between consecutive arcs at each triple point, sorted
/// counter-clockwise around the node.
std::vector<std::array<double, 3>> triple_point_angles(const ArcPartition& partition);

/// Rebuilds the arc partition of a sphere labeling. Triple points sit at the
/// normalised centroids of the void triangles; each interface between two
/// triple points becomes one arc whose midpoint is the half-length point of
/// the crossing polyline. With densities, crossings sit where the two phases
/// balance; otherwise at edge midpoints.
ArcPartition lift_from_mesh(const PartitionTopology& topology, const SurfaceMesh& mesh,
                            const Eigen::MatrixXd* densities = nullptr);

struct PatternSearchOptions {
  int directions = 8;
  double initial_step = 0.05;
  double min_step = 1e-10;
  double initial_penalty_eps = 1.0;
  double min_penalty_eps = 1e-14;
  double area_tolerance = 5e-7 * 4.0 * 3.14159265358979323846;
  int max_sweeps = 200000;  // per penalty round
  std::uint64_t seed = 1;
};

struct PatternSearchResult {
  ArcPartition partition;
  double cost = 0.0;
  double penalty_eps = 0.0;
  double single_count_length = 0.0;
  double max_area_difference = 0.0;
  int rounds = 0;
  int sweeps = 0;
  bool reached_area_tolerance = false;
  /// Cost after every accepted move within each round (one list per round).
  std::vector<std::vector<double>> cost_trace;
};

PatternSearchResult pattern_search(const ArcPartition& start, const PatternSearchOptions& opts = {},
                                   bool record_trace = false);

/// Moves every midpoint to the middle of its arc; the geometry is unchanged.
void recentre_midpoints(ArcPartition& partition);

void write_arcs(const ArcPartition& partition, const std::string& path);
ArcPartition read_arcs(const std::string& path);

/// Per-cell area and perimeter, single and double count, and triple-point
/// angles as plain text.
void write_arc_report(const ArcPartition& partition, const std::string& path);

/// Sampled arcs as OBJ polylines.
void write_arcs_obj(const ArcPartition& partition, const std::string& path, int samples_per_arc = 32);

}  // namespace geopart
