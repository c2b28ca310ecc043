#include <fstream>
#include <iomanip>
#include <sstream>

#include "geopart/io.hpp"
#include "geopart/mesh.hpp"

namespace geopart {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << std::setprecision(17);
  return out;
}

// Next line that is neither blank nor a '#' comment.
bool next_content_line(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    return true;
  }
  return false;
}

}  // namespace

void write_off(const SurfaceMesh& mesh, const std::string& path) {
  auto out = open_out(path);
  out << "OFF\n" << mesh.vertex_count() << ' ' << mesh.triangle_count() << " 0\n";
  for (const auto& p : mesh.vertices()) out << p.x() << ' ' << p.y() << ' ' << p.z() << '\n';
  for (const auto& t : mesh.triangles()) out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
}

SurfaceMesh read_off(const std::string& path, SurfaceProjector projector) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  if (!next_content_line(in, line) || line.rfind("OFF", 0) != 0)
    throw std::runtime_error(path + ": missing OFF header");
  // Counts may share the header line ("OFF 12 20 0").
  std::istringstream counts(line.substr(3));
  int nv = -1, nf = -1, ne = 0;
  if (!(counts >> nv >> nf)) {
    if (!next_content_line(in, line)) throw std::runtime_error(path + ": missing counts line");
    std::istringstream c2(line);
    if (!(c2 >> nv >> nf >> ne)) throw std::runtime_error(path + ": malformed counts line");
  }
  if (nv <= 0 || nf <= 0) throw std::runtime_error(path + ": empty mesh");
  std::vector<Vec3> verts(nv);
  for (int i = 0; i < nv; ++i) {
    if (!next_content_line(in, line)) throw std::runtime_error(path + ": truncated vertex list");
    std::istringstream ls(line);
    if (!(ls >> verts[i].x() >> verts[i].y() >> verts[i].z()))
      throw std::runtime_error(path + ": malformed vertex line " + std::to_string(i));
  }
  std::vector<std::array<int, 3>> tris(nf);
  for (int i = 0; i < nf; ++i) {
    if (!next_content_line(in, line)) throw std::runtime_error(path + ": truncated face list");
    std::istringstream ls(line);
    int k = 0;
    if (!(ls >> k >> tris[i][0] >> tris[i][1] >> tris[i][2]) || k != 3)
      throw std::runtime_error(path + ": face " + std::to_string(i) + " is not a triangle");
  }
  return SurfaceMesh::build(std::move(verts), std::move(tris), std::move(projector));
}

void write_density_vtk(const SurfaceMesh& mesh, const Eigen::MatrixXd& densities,
                       const std::string& path) {
  if (densities.rows() != mesh.vertex_count())
    throw std::invalid_argument("density rows do not match the mesh vertex count");
  auto out = open_out(path);
  out << "# vtk DataFile Version 3.0\ngeopart densities\nASCII\nDATASET POLYDATA\n";
  out << "POINTS " << mesh.vertex_count() << " double\n";
  for (const auto& p : mesh.vertices()) out << p.x() << ' ' << p.y() << ' ' << p.z() << '\n';
  out << "POLYGONS " << mesh.triangle_count() << ' ' << 4 * mesh.triangle_count() << '\n';
  for (const auto& t : mesh.triangles()) out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  out << "POINT_DATA " << mesh.vertex_count() << '\n';
  for (Eigen::Index j = 0; j < densities.cols(); ++j) {
    out << "SCALARS phase_" << j << " double 1\nLOOKUP_TABLE default\n";
    for (Eigen::Index i = 0; i < densities.rows(); ++i) out << densities(i, j) << '\n';
  }
}

Eigen::MatrixXd read_density_vtk(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string token;
  long npoints = -1;
  std::vector<std::vector<double>> fields;
  while (in >> token) {
    if (token == "POINT_DATA") {
      in >> npoints;
    } else if (token == "SCALARS") {
      if (npoints < 0) throw std::runtime_error(path + ": SCALARS before POINT_DATA");
      std::string name, type, lookup, table;
      int comps = 1;
      in >> name >> type >> comps >> lookup >> table;
      std::vector<double> col(npoints);
      for (long i = 0; i < npoints; ++i) {
        if (!(in >> col[i])) throw std::runtime_error(path + ": truncated field " + name);
      }
      fields.push_back(std::move(col));
    }
  }
  if (fields.empty()) throw std::runtime_error(path + ": no point fields");
  Eigen::MatrixXd u(npoints, static_cast<Eigen::Index>(fields.size()));
  for (std::size_t j = 0; j < fields.size(); ++j)
    for (long i = 0; i < npoints; ++i) u(i, static_cast<Eigen::Index>(j)) = fields[j][i];
  return u;
}

}  // namespace geopart
