#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "geopart/fem.hpp"
#include "geopart/mesh.hpp"

namespace geopart {

/// N x n matrix; column i holds the P1 coefficients of phase density i.
using DensityMatrix = Eigen::MatrixXd;

/// Per-mesh-level operators for the relaxed energy.
struct LevelOperators {
  SparseMatrix mass;
  SparseMatrix stiffness;
  Eigen::VectorXd weights;  // lumped mass, v = 1^T M
  double area = 0.0;

  static LevelOperators assemble(const SurfaceMesh& mesh);
};

/// Phase-field energy parameters for one evaluation.
struct EnergyParams {
  double eps = 0.0;
  double penalty = 0.0;  // weight on (std - starget)^2
  double starget = 0.0;
};

/// sqrt((1/n)(1 - 1/n)): mass-weighted standard deviation of an indicator of
/// area A/n.
double default_starget(int phases);

/// Mass-weighted standard deviation of a P1 field.
double weighted_std(const Eigen::VectorXd& phi, const Eigen::VectorXd& weights, double area);

/// sum_i eps phi_i^T K phi_i + (1/eps) q_i^T M q_i + penalty (std_i - starget)^2,
/// with q = phi (1 - phi) componentwise, so that q^T M q integrates
/// phi^2 (1 - phi)^2.
double energy(const DensityMatrix& u, const LevelOperators& ops, const EnergyParams& p);

/// Analytic gradient of energy() with respect to every entry of u.
DensityMatrix gradient(const DensityMatrix& u, const LevelOperators& ops, const EnergyParams& p);

/// Energy and gradient sharing the sparse products.
double energy_and_gradient(const DensityMatrix& u, const LevelOperators& ops,
                           const EnergyParams& p, DensityMatrix& grad);

/// Euclidean projection onto {row sums = row_targets, v^T column_j = col_targets_j}.
/// Requires sum(col_targets) = <v, row_targets>.
DensityMatrix project(const DensityMatrix& a, const Eigen::VectorXd& row_targets,
                      const Eigen::VectorXd& col_targets, const Eigen::VectorXd& weights);

/// Projection onto the equal-area partition constraints (rows sum to 1,
/// weighted columns equal area/n).
DensityMatrix project_partition(const DensityMatrix& a, const Eigen::VectorXd& weights,
                                double area);

/// Projection onto the tangent space of the constraints (zero targets).
DensityMatrix project_tangent(const DensityMatrix& a, const Eigen::VectorXd& weights);

struct ConstraintResiduals {
  double row = 0.0;     // max |row sum - 1|
  double column = 0.0;  // max |<v, phi_j> - A/n|
};
ConstraintResiduals partition_residuals(const DensityMatrix& u, const Eigen::VectorXd& weights,
                                        double area);

/// Uniform [0,1) entries from a seeded mt19937_64, then projected.
DensityMatrix random_init(int vertices, int phases, std::uint64_t seed,
                          const Eigen::VectorXd& weights, double area);

struct MinimizeOptions {
  int memory = 10;
  double gradient_tolerance = 1e-6;  // relative to the surface area
  int max_iterations = 2000;
  int stagnation_window = 50;
  double stagnation_tolerance = 1e-12;
  bool record_trace = true;
};

struct MinimizeResult {
  DensityMatrix u;
  double initial_energy = 0.0;
  double energy = 0.0;
  double gradient_norm = 0.0;
  int iterations = 0;
  std::string stop_reason;
  std::vector<double> energy_trace;  // one value per accepted iterate
  ConstraintResiduals max_residuals;  // worst over all accepted iterates
};

/// Projected L-BFGS on the affine constraint set. u0 must already satisfy the
/// constraints.
MinimizeResult minimize(const DensityMatrix& u0, const LevelOperators& ops, const EnergyParams& p,
                        const MinimizeOptions& opts = {});

struct RelaxConfig {
  int phases = 2;
  /// Explicit eps per level; empty means eps = mean edge length per level.
  std::vector<double> eps_schedule;
  /// Negative: 0.01 * (initial energy) / starget^2 on the first level.
  double penalty = -1.0;
  /// Negative: default_starget(phases).
  double starget = -1.0;
  std::uint64_t seed = 1;
  MinimizeOptions lbfgs;
  /// Iteration caps per level; overrides lbfgs.max_iterations where given.
  std::vector<int> level_max_iterations;
};

struct LevelReport {
  int vertices = 0;
  double eps = 0.0;
  double initial_energy = 0.0;
  double energy = 0.0;
  int iterations = 0;
  std::string stop_reason;
  ConstraintResiduals residuals;
};

struct ContinuationResult {
  DensityMatrix u;
  SurfaceMesh mesh;
  double penalty = 0.0;
  double starget = 0.0;
  std::vector<LevelReport> levels;
};

/// eps-continuation: random start on `initial`, minimize, refine, prolong,
/// re-project and minimize again, `levels` times in total.
ContinuationResult continuation(const SurfaceMesh& initial, const RelaxConfig& config, int levels);

}  // namespace geopart
