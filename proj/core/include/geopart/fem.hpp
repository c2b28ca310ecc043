#pragma once

#include <string>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "geopart/mesh.hpp"

namespace geopart {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Consistent P1 mass matrix: per flat triangle, area/6 on the diagonal and
/// area/12 off it.
SparseMatrix assemble_mass(const SurfaceMesh& mesh);

/// P1 stiffness matrix with gradients taken in each triangle's plane
/// (cotangent weights). Constants lie in its kernel.
SparseMatrix assemble_stiffness(const SurfaceMesh& mesh);

/// v_i = sum_j M_ij. Sums to the mesh area.
Eigen::VectorXd lumped_weights(const SparseMatrix& mass);

/// Coordinate text dump, one "row col value" triple per line (0-based).
void write_coordinate(const SparseMatrix& m, const std::string& path);

}  // namespace geopart
