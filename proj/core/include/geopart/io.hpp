#pragma once

#include <string>

#include <Eigen/Core>

#include "geopart/mesh.hpp"

namespace geopart {

/// Legacy-ASCII VTK polydata with one scalar point field per phase
/// ("phase_0", "phase_1", ...).
void write_density_vtk(const SurfaceMesh& mesh, const Eigen::MatrixXd& densities,
                       const std::string& path);

/// Reads the phase fields back from a file written by write_density_vtk.
Eigen::MatrixXd read_density_vtk(const std::string& path);

}  // namespace geopart
