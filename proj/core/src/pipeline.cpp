#include "geopart/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "geopart/contour.hpp"
#include "geopart/io.hpp"
#include "geopart/meshopt.hpp"
#include "geopart/relax.hpp"
#include "geopart/spherearc.hpp"

namespace geopart {

namespace fs = std::filesystem;

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

int to_int(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  int x = 0;
  try {
    x = std::stoi(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size() || v.empty()) throw std::invalid_argument(key + ": expected an integer, got '" + v + "'");
  return x;
}

double to_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double x = 0;
  try {
    x = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size() || v.empty()) throw std::invalid_argument(key + ": expected a number, got '" + v + "'");
  return x;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "1" || v == "true" || v == "yes") return true;
  if (v == "0" || v == "false" || v == "no") return false;
  throw std::invalid_argument(key + ": expected true or false, got '" + v + "'");
}

std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(12) << x;
  return os.str();
}

}  // namespace

void PipelineConfig::set(const std::string& key_in, const std::string& value_in) {
  std::string key = trim(key_in);
  std::replace(key.begin(), key.end(), '-', '_');
  const std::string v = trim(value_in);
  if (key == "surface") surface = v;
  else if (key == "n" || key == "phases") phases = to_int(key, v);
  else if (key == "levels") levels = to_int(key, v);
  else if (key == "resolution") resolution = to_int(key, v);
  else if (key == "seed") {
    const int s = to_int(key, v);
    if (s < 0) throw std::invalid_argument("seed must be non-negative");
    seed = static_cast<std::uint64_t>(s);
  } else if (key == "seeds") seeds = to_int(key, v);
  else if (key == "refine") refine = v;
  else if (key == "level_max_iterations") {
    level_max_iterations.clear();
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) level_max_iterations.push_back(to_int(key, trim(item)));
  } else if (key == "gradient_tolerance") gradient_tolerance = to_double(key, v);
  else if (key == "eps_penalty_target") eps_penalty_target = to_double(key, v);
  else if (key == "arc_area_tolerance") arc_area_tolerance = to_double(key, v);
  else if (key == "directions") directions = to_int(key, v);
  else if (key == "initial_step") initial_step = to_double(key, v);
  else if (key == "max_restarts") max_restarts = to_int(key, v);
  else if (key == "mesh_area_tolerance") mesh_area_tolerance = to_double(key, v);
  else if (key == "out") out = v;
  else if (key == "deterministic") deterministic = to_bool(key, v);
  else throw std::invalid_argument("unknown config key '" + key_in + "'");
}

std::string PipelineConfig::to_text() const {
  std::ostringstream os;
  os << "surface=" << surface << '\n'
     << "phases=" << phases << '\n'
     << "levels=" << levels << '\n'
     << "resolution=" << resolution << '\n'
     << "seed=" << seed << '\n'
     << "seeds=" << seeds << '\n'
     << "refine=" << refine << '\n'
     << "level_max_iterations=";
  for (std::size_t i = 0; i < level_max_iterations.size(); ++i) os << (i ? "," : "") << level_max_iterations[i];
  os << '\n'
     << "gradient_tolerance=" << fmt(gradient_tolerance) << '\n'
     << "eps_penalty_target=" << fmt(eps_penalty_target) << '\n'
     << "arc_area_tolerance=" << fmt(arc_area_tolerance) << '\n'
     << "directions=" << directions << '\n'
     << "initial_step=" << fmt(initial_step) << '\n'
     << "max_restarts=" << max_restarts << '\n'
     << "mesh_area_tolerance=" << fmt(mesh_area_tolerance) << '\n'
     << "out=" << out << '\n'
     << "deterministic=" << (deterministic ? "true" : "false") << '\n';
  return os.str();
}

PipelineConfig PipelineConfig::resolved() const {
  PipelineConfig c = *this;
  if (c.phases < 2) throw std::invalid_argument("n must be at least 2");
  if (c.seeds < 1) throw std::invalid_argument("seeds must be at least 1");
  if (c.levels == 0) c.levels = c.is_sphere() ? 3 : 2;
  if (c.levels < 1) throw std::invalid_argument("levels must be at least 1");
  if (c.resolution == 0) c.resolution = c.is_sphere() ? 4 : 16;
  if (c.refine == "auto") c.refine = c.is_sphere() ? "sphere" : "mesh";
  if (c.refine != "mesh" && c.refine != "sphere" && c.refine != "none")
    throw std::invalid_argument("refine must be auto, mesh, sphere or none");
  if (c.refine == "sphere" && !c.is_sphere())
    throw std::invalid_argument("sphere-arc refinement needs surface=sphere");
  if (c.directions < 2) throw std::invalid_argument("directions must be at least 2");
  if (!(c.eps_penalty_target > 0)) throw std::invalid_argument("eps_penalty_target must be positive");
  return c;
}

PipelineConfig read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path);
  PipelineConfig c;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": expected key=value");
    c.set(line.substr(0, eq), line.substr(eq + 1));
  }
  return c;
}

SurfaceMesh build_surface(const PipelineConfig& config) {
  const PipelineConfig c = config.resolved();
  if (c.surface == "sphere") return generate_icosphere(c.resolution);
  if (c.surface == "torus") return generate_implicit(torus_surface(), c.resolution);
  if (c.surface == "double-torus") return generate_implicit(double_torus_surface(), c.resolution);
  if (c.surface == "banchoff-chmutov") return generate_implicit(banchoff_chmutov_surface(), c.resolution);
  if (fs::path(c.surface).extension() == ".off") return read_off(c.surface);
  throw std::invalid_argument("unknown surface '" + c.surface + "'");
}

RunResult run_single(const PipelineConfig& config, std::uint64_t seed, const std::string& run_dir) {
  const PipelineConfig c = config.resolved();
  RunResult r;
  r.phases = c.phases;
  r.surface = c.surface;
  r.seed = seed;
  const auto t0 = std::chrono::steady_clock::now();
  const bool write = !run_dir.empty();
  auto path = [&](const std::string& name) { return (fs::path(run_dir) / name).string(); };
  if (write) {
    fs::create_directories(run_dir);
    PipelineConfig echo = c;
    echo.seed = seed;
    echo.seeds = 1;
    std::ofstream(path("config.txt")) << echo.to_text();
  }

  r.stage = "mesh";
  try {
    const SurfaceMesh base = build_surface(c);
    if (write) write_off(base, path("mesh_level0.off"));

    r.stage = "relax";
    RelaxConfig rc;
    rc.phases = c.phases;
    rc.seed = seed;
    rc.level_max_iterations = c.level_max_iterations;
    rc.lbfgs.gradient_tolerance = c.gradient_tolerance;
    rc.lbfgs.record_trace = false;
    const ContinuationResult relaxed = continuation(base, rc, c.levels);
    if (write) {
      write_off(relaxed.mesh, path("mesh_final.off"));
      write_density_vtk(relaxed.mesh, relaxed.u, path("densities.vtk"));
      std::ofstream lv(path("levels.txt"));
      lv << std::setprecision(12);
      for (const auto& l : relaxed.levels)
        lv << "vertices " << l.vertices << " eps " << l.eps << " energy " << l.energy << " iterations "
           << l.iterations << " stop " << l.stop_reason << '\n';
    }

    r.stage = "extract";
    const PhaseLabeling labeling = label(relaxed.u);
    const PartitionTopology topo = extract(labeling, relaxed.mesh);
    if (write) write_topology(topo, path("topology.txt"));

    r.stage = c.refine;
    if (c.refine == "sphere") {
      const ArcPartition lifted = lift_from_mesh(topo, relaxed.mesh, &relaxed.u);
      PatternSearchOptions po;
      po.directions = c.directions;
      po.initial_step = c.initial_step;
      po.min_penalty_eps = c.eps_penalty_target;
      po.area_tolerance = c.arc_area_tolerance;
      po.seed = seed;
      const PatternSearchResult ps = pattern_search(lifted, po);
      const auto areas = face_areas(ps.partition);
      const double target = 4.0 * std::numbers::pi / c.phases;
      for (double a : areas) r.max_area_residual = std::max(r.max_area_residual, std::abs(a - target));
      r.single_count_length = ps.single_count_length;
      r.triple_angles = triple_point_angles(ps.partition);
      if (write) {
        write_arcs(ps.partition, path("arcs.txt"));
        write_arcs_obj(ps.partition, path("arcs.obj"));
        write_arc_report(ps.partition, path("report.txt"));
      }
    } else {
      auto mesh = std::make_shared<const SurfaceMesh>(relaxed.mesh);
      const MeshPartitionState start = MeshPartitionState::from_topology(mesh, topo);
      if (c.refine == "mesh") {
        RefineOptions ro;
        ro.max_restarts = c.max_restarts;
        ro.solver.area_tolerance = c.mesh_area_tolerance;
        const RefineOutcome out = refine_on_mesh(start, ro);
        r.single_count_length = out.report.single_count_length;
        r.max_area_residual = out.report.max_area_residual;
        r.restarts = out.report.restarts;
        if (write) {
          write_refine_report(out.report, path("report.txt"));
          write_polylines_obj(out.state, path("polylines.obj"));
        }
      } else {
        r.single_count_length = raw_perimeter(topo, relaxed.mesh);
        for (double a : cell_areas(start))
          r.max_area_residual = std::max(r.max_area_residual, std::abs(a - start.target_area()));
        if (write) write_polylines_obj(start, path("polylines.obj"));
      }
    }
    r.double_count_length = 2.0 * r.single_count_length;
    r.ok = true;
  } catch (const std::exception& e) {
    r.error = e.what();
    if (write) std::ofstream(path("error.txt")) << "stage " << r.stage << ": " << r.error << '\n';
  }
  r.wall_time_s = c.deterministic ? 0.0
                                  : std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

bool PipelineResult::all_ok() const {
  return std::all_of(runs.begin(), runs.end(), [](const RunResult& r) { return r.ok; });
}

PipelineResult run_pipeline(const PipelineConfig& config) {
  const PipelineConfig c = config.resolved();
  PipelineResult res;
  if (!c.out.empty()) {
    fs::create_directories(c.out);
    std::ofstream(fs::path(c.out) / "config.txt") << c.to_text();
  }
  for (int k = 0; k < c.seeds; ++k) {
    const std::uint64_t seed = c.seed + static_cast<std::uint64_t>(k);
    const std::string dir =
        c.out.empty() ? std::string() : (fs::path(c.out) / ("seed_" + std::to_string(seed))).string();
    res.runs.push_back(run_single(c, seed, dir));
    const RunResult& r = res.runs.back();
    if (r.ok && (res.best < 0 || r.single_count_length < res.runs[res.best].single_count_length))
      res.best = static_cast<int>(res.runs.size()) - 1;
  }
  if (!c.out.empty()) {
    write_csv(res.runs, (fs::path(c.out) / "results.csv").string());
    std::ofstream(fs::path(c.out) / "summary.txt") << summary_text(res.runs);
  }
  return res;
}

std::string csv_header() {
  return "n,surface,seed,single_count_length,double_count_length,max_area_residual,restarts,wall_time_s";
}

std::string csv_row(const RunResult& r) {
  std::ostringstream os;
  os << r.phases << ',' << r.surface << ',' << r.seed << ',';
  if (r.ok) {
    os << std::setprecision(10) << r.single_count_length << ',' << r.double_count_length << ','
       << std::setprecision(4) << r.max_area_residual;
  } else {
    os << "nan,nan,nan";
  }
  os << ',' << r.restarts << ',' << std::fixed << std::setprecision(3) << r.wall_time_s;
  return os.str();
}

void write_csv(const std::vector<RunResult>& runs, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << csv_header() << '\n';
  for (const auto& r : runs) out << csv_row(r) << '\n';
}

std::vector<RunResult> read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || trim(line) != csv_header())
    throw std::runtime_error(path + ": unexpected CSV header");
  std::vector<RunResult> runs;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, ',')) f.push_back(item);
    if (f.size() != 8) throw std::runtime_error(path + ": expected 8 columns in '" + line + "'");
    RunResult r;
    r.phases = to_int("n", f[0]);
    r.surface = f[1];
    r.seed = std::stoull(f[2]);
    r.ok = f[3] != "nan";
    if (r.ok) {
      r.single_count_length = to_double("single_count_length", f[3]);
      r.double_count_length = to_double("double_count_length", f[4]);
      r.max_area_residual = to_double("max_area_residual", f[5]);
    }
    r.restarts = to_int("restarts", f[6]);
    r.wall_time_s = to_double("wall_time_s", f[7]);
    runs.push_back(r);
  }
  return runs;
}

std::vector<RunResult> best_per_case(const std::vector<RunResult>& runs) {
  std::map<std::pair<std::string, int>, RunResult> best;
  for (const auto& r : runs) {
    if (!r.ok) continue;
    const auto key = std::make_pair(r.surface, r.phases);
    auto it = best.find(key);
    if (it == best.end() || r.single_count_length < it->second.single_count_length) best[key] = r;
  }
  std::vector<RunResult> out;
  for (auto& [k, r] : best) out.push_back(r);
  return out;
}

std::string summary_text(const std::vector<RunResult>& runs) {
  std::ostringstream os;
  const auto best = best_per_case(runs);
  const auto failed = std::count_if(runs.begin(), runs.end(), [](const RunResult& r) { return !r.ok; });
  os << "runs " << runs.size() << " failed " << failed << '\n';
  os << std::setprecision(10);
  for (const auto& r : best) {
    os << r.surface << " n=" << r.phases << " best seed " << r.seed << ": single " << r.single_count_length
       << " double " << r.double_count_length << " area residual " << std::setprecision(3) << r.max_area_residual
       << std::setprecision(10) << '\n';
  }
  for (const auto& r : runs) {
    if (!r.ok) os << r.surface << " n=" << r.phases << " seed " << r.seed << " failed: " << r.error << '\n';
  }
  return os.str();
}

}  // namespace geopart
