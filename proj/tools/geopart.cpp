// Command line driver: meshing, relaxation, contour extraction, the two
// refinement stages, the full pipeline and CSV reporting.

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "geopart/contour.hpp"
#include "geopart/io.hpp"
#include "geopart/mesh.hpp"
#include "geopart/meshopt.hpp"
#include "geopart/pipeline.hpp"
#include "geopart/relax.hpp"
#include "geopart/spherearc.hpp"

namespace fs = std::filesystem;
using namespace geopart;

namespace {

// "4", "4,6,8" or "4-12".
std::vector<int> parse_phase_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto dash = item.find('-', 1);
    if (dash != std::string::npos) {
      const int lo = std::stoi(item.substr(0, dash));
      const int hi = std::stoi(item.substr(dash + 1));
      for (int n = lo; n <= hi; ++n) out.push_back(n);
    } else {
      out.push_back(std::stoi(item));
    }
  }
  if (out.empty()) throw std::invalid_argument("empty phase list");
  return out;
}

struct CommonFlags {
  std::string config;
  std::string surface;
  std::string n;
  int levels = -1;
  int resolution = -1;
  long long seed = -1;
  int seeds = -1;
  double eps_penalty_target = -1;
  std::string refine;
  std::string out;
  bool deterministic = false;

  void add(CLI::App* app, bool with_seeds) {
    app->add_option("--config", config, "key=value config file; flags override it");
    app->add_option("--surface", surface, "sphere | torus | double-torus | banchoff-chmutov | mesh.off");
    app->add_option("--n", n, "phase count; the pipeline also takes lists like 4,6 or 4-12");
    app->add_option("--levels", levels, "continuation levels (each refines the mesh once)");
    app->add_option("--resolution", resolution, "icosphere subdivisions or implicit grid resolution");
    app->add_option("--seed", seed, "first random seed");
    if (with_seeds) app->add_option("--seeds", seeds, "number of seeds, starting at --seed");
    app->add_option("--eps-penalty-target", eps_penalty_target, "smallest area-penalty eps in the sphere-arc stage");
    app->add_option("--refine", refine, "auto | mesh | sphere | none");
    app->add_option("--out", out, "output path");
    app->add_flag("--deterministic", deterministic, "report zero wall time so reports are byte-identical");
  }

  PipelineConfig config_for(int phases_override = -1) const {
    PipelineConfig c = config.empty() ? PipelineConfig{} : read_config(config);
    if (!surface.empty()) c.surface = surface;
    if (!n.empty() && phases_override < 0) c.phases = parse_phase_list(n).front();
    if (phases_override >= 0) c.phases = phases_override;
    if (levels >= 0) c.levels = levels;
    if (resolution >= 0) c.resolution = resolution;
    if (seed >= 0) c.seed = static_cast<std::uint64_t>(seed);
    if (seeds >= 0) c.seeds = seeds;
    if (eps_penalty_target > 0) c.eps_penalty_target = eps_penalty_target;
    if (!refine.empty()) c.refine = refine;
    if (!out.empty()) c.out = out;
    if (deterministic) c.deterministic = true;
    return c;
  }
};

void print_mesh(const SurfaceMesh& m) {
  const auto s = mesh_statistics(m);
  std::cout << "vertices " << m.vertex_count() << " triangles " << m.triangle_count() << " edges "
            << m.edge_count() << " euler " << s.euler_characteristic << " area " << std::setprecision(10)
            << s.area << " mean_edge " << s.mean_edge_length << '\n';
}

int cmd_mesh(const CommonFlags& f) {
  const PipelineConfig c = f.config_for();
  const SurfaceMesh m = build_surface(c);
  print_mesh(m);
  if (!c.out.empty()) write_off(m, c.out);
  return 0;
}

int cmd_relax(const CommonFlags& f) {
  const PipelineConfig c = f.config_for().resolved();
  const SurfaceMesh base = build_surface(c);
  RelaxConfig rc;
  rc.phases = c.phases;
  rc.seed = c.seed;
  rc.level_max_iterations = c.level_max_iterations;
  rc.lbfgs.gradient_tolerance = c.gradient_tolerance;
  rc.lbfgs.record_trace = false;
  const ContinuationResult res = continuation(base, rc, c.levels);
  std::cout << std::setprecision(10);
  for (const auto& l : res.levels)
    std::cout << "level vertices " << l.vertices << " eps " << l.eps << " energy " << l.energy << " iterations "
              << l.iterations << " (" << l.stop_reason << ") residuals " << l.residuals.row << ' '
              << l.residuals.column << '\n';
  if (!c.out.empty()) {
    fs::create_directories(c.out);
    write_off(res.mesh, (fs::path(c.out) / "mesh_final.off").string());
    write_density_vtk(res.mesh, res.u, (fs::path(c.out) / "densities.vtk").string());
    std::ofstream(fs::path(c.out) / "config.txt") << c.to_text();
  }
  return 0;
}

int cmd_extract(const std::string& mesh_path, const std::string& dens_path, const std::string& out) {
  const SurfaceMesh mesh = read_off(mesh_path);
  const Eigen::MatrixXd u = read_density_vtk(dens_path);
  if (u.rows() != mesh.vertex_count()) throw std::invalid_argument("densities do not match the mesh");
  const PartitionTopology topo = extract(label(u), mesh);
  std::cout << "phases " << topo.phases << " boundary_edges " << topo.boundary_edges.size() << " voids "
            << topo.voids.size() << " adjacent_pairs " << topo.adjacency.size() << " raw_perimeter "
            << std::setprecision(10) << raw_perimeter(topo, mesh) << '\n';
  if (!out.empty()) write_topology(topo, out);
  return 0;
}

int cmd_refine_mesh(const std::string& mesh_path, const std::string& topo_path, const CommonFlags& f) {
  const PipelineConfig c = f.config_for();
  auto mesh = std::make_shared<const SurfaceMesh>(read_off(mesh_path));
  const PartitionTopology topo = read_topology(topo_path);
  RefineOptions ro;
  ro.max_restarts = c.max_restarts;
  ro.solver.area_tolerance = c.mesh_area_tolerance;
  const RefineOutcome out = refine_on_mesh(MeshPartitionState::from_topology(mesh, topo), ro);
  std::cout << std::setprecision(10) << "single_count_length " << out.report.single_count_length
            << " double_count_length " << out.report.double_count_length << " max_area_residual "
            << out.report.max_area_residual << " restarts " << out.report.restarts << '\n';
  if (!out.report.message.empty()) std::cout << out.report.message << '\n';
  if (!c.out.empty()) {
    fs::create_directories(c.out);
    write_refine_report(out.report, (fs::path(c.out) / "report.txt").string());
    write_polylines_obj(out.state, (fs::path(c.out) / "polylines.obj").string());
  }
  return 0;
}

int cmd_refine_sphere(const std::string& mesh_path, const std::string& topo_path, const std::string& dens_path,
                      const CommonFlags& f) {
  const PipelineConfig c = f.config_for();
  const SurfaceMesh mesh = read_off(mesh_path);
  const PartitionTopology topo = read_topology(topo_path);
  Eigen::MatrixXd u;
  if (!dens_path.empty()) u = read_density_vtk(dens_path);
  const ArcPartition lifted = lift_from_mesh(topo, mesh, dens_path.empty() ? nullptr : &u);
  PatternSearchOptions po;
  po.directions = c.directions;
  po.initial_step = c.initial_step;
  po.min_penalty_eps = c.eps_penalty_target;
  po.area_tolerance = c.arc_area_tolerance;
  po.seed = c.seed;
  const PatternSearchResult ps = pattern_search(lifted, po);
  std::cout << std::setprecision(10) << "single_count_length " << ps.single_count_length << " double_count_length "
            << 2 * ps.single_count_length << " max_area_difference " << ps.max_area_difference << " penalty_eps "
            << ps.penalty_eps << " rounds " << ps.rounds << '\n';
  if (!ps.reached_area_tolerance) std::cout << "area tolerance not reached\n";
  if (!c.out.empty()) {
    fs::create_directories(c.out);
    write_arcs(ps.partition, (fs::path(c.out) / "arcs.txt").string());
    write_arcs_obj(ps.partition, (fs::path(c.out) / "arcs.obj").string());
    write_arc_report(ps.partition, (fs::path(c.out) / "report.txt").string());
  }
  return 0;
}

int cmd_pipeline(const CommonFlags& f) {
  const std::vector<int> phases = f.n.empty() ? std::vector<int>{f.config_for().phases} : parse_phase_list(f.n);
  std::vector<RunResult> all;
  bool ok = true;
  const std::string root = f.config_for().out;
  for (int n : phases) {
    PipelineConfig c = f.config_for(n);
    if (!root.empty() && phases.size() > 1) c.out = (fs::path(root) / ("n" + std::to_string(n))).string();
    const PipelineResult res = run_pipeline(c);
    ok = ok && res.all_ok() && res.best >= 0;
    for (const auto& r : res.runs) {
      std::cout << csv_row(r) << (r.ok ? "" : "  # " + r.stage + ": " + r.error) << '\n';
      all.push_back(r);
    }
  }
  if (!root.empty() && phases.size() > 1) {
    write_csv(all, (fs::path(root) / "results.csv").string());
    std::ofstream(fs::path(root) / "summary.txt") << summary_text(all);
  }
  std::cout << summary_text(all);
  return ok ? 0 : 1;
}

int cmd_report(const std::vector<std::string>& inputs, const std::string& out) {
  std::vector<RunResult> runs;
  for (const auto& p : inputs) {
    auto r = read_csv(p);
    runs.insert(runs.end(), r.begin(), r.end());
  }
  const auto best = best_per_case(runs);
  if (!out.empty()) {
    write_csv(best, out);
  } else {
    std::cout << csv_header() << '\n';
    for (const auto& r : best) std::cout << csv_row(r) << '\n';
  }
  std::cout << summary_text(runs);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Equal-area minimal-perimeter partitions of surfaces"};
  app.require_subcommand(1);

  CommonFlags mesh_f, relax_f, rmesh_f, rsphere_f, pipe_f;
  auto* mesh = app.add_subcommand("mesh", "generate a surface mesh and print its statistics");
  mesh_f.add(mesh, false);

  auto* relax = app.add_subcommand("relax", "phase-field relaxation with mesh continuation");
  relax_f.add(relax, false);

  std::string ex_mesh, ex_dens, ex_out;
  auto* extract_cmd = app.add_subcommand("extract", "label vertices and extract the partition topology");
  extract_cmd->add_option("--mesh", ex_mesh, "OFF mesh")->required();
  extract_cmd->add_option("--densities", ex_dens, "density VTK")->required();
  extract_cmd->add_option("--out", ex_out, "topology file to write");

  std::string rm_mesh, rm_topo;
  auto* rmesh = app.add_subcommand("refine-mesh", "constrained interface optimisation on the mesh");
  rmesh->add_option("--mesh", rm_mesh, "OFF mesh")->required();
  rmesh->add_option("--topology", rm_topo, "topology file")->required();
  rmesh_f.add(rmesh, false);

  std::string rs_mesh, rs_topo, rs_dens;
  auto* rsphere = app.add_subcommand("refine-sphere", "circle-arc refinement on the unit sphere");
  rsphere->add_option("--mesh", rs_mesh, "OFF sphere mesh")->required();
  rsphere->add_option("--topology", rs_topo, "topology file")->required();
  rsphere->add_option("--densities", rs_dens, "density VTK for interface placement");
  rsphere_f.add(rsphere, false);

  auto* pipe = app.add_subcommand("pipeline", "mesh, relax, extract and refine for every seed");
  pipe_f.add(pipe, true);

  std::vector<std::string> rep_in;
  std::string rep_out;
  auto* rep = app.add_subcommand("report", "best row per surface and phase count");
  rep->add_option("--in", rep_in, "result CSV files")->required();
  rep->add_option("--out", rep_out, "CSV to write; stdout when omitted");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*mesh) return cmd_mesh(mesh_f);
    if (*relax) return cmd_relax(relax_f);
    if (*extract_cmd) return cmd_extract(ex_mesh, ex_dens, ex_out);
    if (*rmesh) return cmd_refine_mesh(rm_mesh, rm_topo, rmesh_f);
    if (*rsphere) return cmd_refine_sphere(rs_mesh, rs_topo, rs_dens, rsphere_f);
    if (*pipe) return cmd_pipeline(pipe_f);
    if (*rep) return cmd_report(rep_in, rep_out);
  } catch (const UnresolvableJunction& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
