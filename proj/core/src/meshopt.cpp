#include "geopart/meshopt.hpp"

#include <algorithm>
#include <cstdlib>
#include <cmath>
#include <deque>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <map>

#include <Eigen/Geometry>

#include "geopart/fermat.hpp"

namespace geopart {

namespace {

int distinct(int a, int b, int c) { return 1 + (b != a) + (c != a && c != b); }

double tri_area(const Vec3& a, const Vec3& b, const Vec3& c) {
  return 0.5 * (b - a).cross(c - a).norm();
}

constexpr double kZeroSegment = 1e-12;
constexpr double kFdStep = 1e-7;

}  // namespace

MeshPartitionState::MeshPartitionState(std::shared_ptr<const SurfaceMesh> mesh, int phases,
                                       std::vector<int> labels)
    : mesh_(std::move(mesh)), phases_(phases), labels_(std::move(labels)) {
  if (!mesh_) throw std::invalid_argument("MeshPartitionState needs a mesh");
  if (static_cast<int>(labels_.size()) != mesh_->vertex_count())
    throw std::invalid_argument("labels do not match the mesh");
  if (phases_ < 2) throw std::invalid_argument("need at least two phases");
  lambda_ = Eigen::VectorXd::Constant(mesh_->edge_count(), 0.5);
  mesh_area_ = mesh_statistics(*mesh_).area;
  target_area_ = mesh_area_ / phases_;
  rebuild();
}

MeshPartitionState MeshPartitionState::from_topology(std::shared_ptr<const SurfaceMesh> mesh,
                                                     const PartitionTopology& topology) {
  return MeshPartitionState(std::move(mesh), topology.phases, topology.labels);
}

void MeshPartitionState::rebuild() {
  active_.clear();
  active_index_.assign(mesh_->edge_count(), -1);
  for (int e = 0; e < mesh_->edge_count(); ++e) {
    const auto& v = mesh_->edges()[e].v;
    if (labels_[v[0]] != labels_[v[1]]) {
      active_index_[e] = static_cast<int>(active_.size());
      active_.push_back(e);
    }
  }
  voids_.clear();
  mixed_.clear();
  uniform_area_.assign(phases_, 0.0);
  for (int t = 0; t < mesh_->triangle_count(); ++t) {
    const auto& tri = mesh_->triangles()[t];
    const int nd = distinct(labels_[tri[0]], labels_[tri[1]], labels_[tri[2]]);
    if (nd == 1) uniform_area_[labels_[tri[0]]] += mesh_->triangle_area(t);
    else mixed_.push_back(t);
    if (nd == 3) voids_.push_back(t);
  }
}

Vec3 MeshPartitionState::crossing_point(int edge) const {
  const auto& v = mesh_->edges()[edge].v;
  const double l = lambda_[edge];
  return l * mesh_->vertices()[v[0]] + (1.0 - l) * mesh_->vertices()[v[1]];
}

Eigen::VectorXd MeshPartitionState::active_parameters() const {
  Eigen::VectorXd x(static_cast<Eigen::Index>(active_.size()));
  for (std::size_t k = 0; k < active_.size(); ++k) x[static_cast<Eigen::Index>(k)] = lambda_[active_[k]];
  return x;
}

void MeshPartitionState::set_active_parameters(const Eigen::VectorXd& x) {
  for (std::size_t k = 0; k < active_.size(); ++k) lambda_[active_[k]] = x[static_cast<Eigen::Index>(k)];
}

void MeshPartitionState::relabel(const std::vector<std::pair<int, int>>& vertex_label_pairs) {
  const std::vector<int> old_active = active_index_;
  for (const auto& [v, l] : vertex_label_pairs) labels_[v] = l;
  rebuild();
  for (int e : active_) {
    if (old_active[e] < 0) lambda_[e] = 0.5;
  }
}

namespace {

// Fraction of the way from vertex `a` to the other endpoint of `edge` at
// which the crossing point sits, and its derivative in lambda.
std::pair<double, double> fraction_from(const MeshPartitionState& s, int a, int edge) {
  const auto& v = s.mesh().edges()[edge].v;
  const double l = s.lambda()[edge];
  if (v[0] == a) return {1.0 - l, -1.0};
  return {l, 1.0};
}

struct FermatGeometry {
  Vec3 x;
  std::array<double, 3> area{};
  std::array<double, 3> length{};
  double star = 0.0;
  bool degenerate = false;
};

// p[k] lies on the edge from vertex k to vertex k+1; the cell at vertex k is
// bounded by p[k] (outgoing) and p[k-1] (incoming).
FermatGeometry fermat_geometry(const std::array<Vec3, 3>& p) {
  FermatGeometry g;
  g.degenerate = nearly_collinear(p[0], p[1], p[2]);
  g.x = fermat_point(p[0], p[1], p[2]);
  for (int k = 0; k < 3; ++k) {
    const Vec3& out = p[k];
    const Vec3& in = p[(k + 2) % 3];
    g.area[k] = tri_area(out, g.x, in);
    g.length[k] = (out - g.x).norm() + (g.x - in).norm() - (out - in).norm();
    g.star += (p[k] - g.x).norm();
  }
  return g;
}

std::array<Vec3, 3> void_points(const MeshPartitionState& s, int t, const std::array<double, 3>& shift) {
  const auto& te = s.mesh().triangle_edges(t);
  std::array<Vec3, 3> p;
  for (int k = 0; k < 3; ++k) {
    const auto& v = s.mesh().edges()[te[k]].v;
    const double l = s.lambda()[te[k]] + shift[k];
    p[k] = l * s.mesh().vertices()[v[0]] + (1.0 - l) * s.mesh().vertices()[v[1]];
  }
  return p;
}

struct Evaluation {
  double perimeter = 0.0;
  Eigen::VectorXd perimeter_grad;  // active-indexed
  std::vector<double> areas;
  Eigen::MatrixXd area_grad;  // active x phases
  std::vector<double> cell_perimeter;
  int zero_segments = 0;
};

Evaluation evaluate(const MeshPartitionState& s, bool with_grad) {
  const SurfaceMesh& mesh = s.mesh();
  const auto& lab = s.labels();
  const int m = static_cast<int>(s.active_edges().size());
  Evaluation ev;
  ev.areas = s.uniform_area();
  ev.cell_perimeter.assign(s.phases(), 0.0);
  if (with_grad) {
    ev.perimeter_grad = Eigen::VectorXd::Zero(m);
    ev.area_grad = Eigen::MatrixXd::Zero(m, s.phases());
  }

  auto add_corner = [&](int t, int k, double area_t) {
    // Corner of vertex k cut off by the crossing points on its two edges.
    const auto& tri = mesh.triangles()[t];
    const auto& te = mesh.triangle_edges(t);
    const int a = tri[k];
    const int e_out = te[k];
    const int e_in = te[(k + 2) % 3];
    const auto [f1, d1] = fraction_from(s, a, e_out);
    const auto [f2, d2] = fraction_from(s, a, e_in);
    const double corner = f1 * f2 * area_t;
    ev.areas[lab[a]] += corner;
    if (with_grad) {
      ev.area_grad(s.active_index(e_out), lab[a]) += d1 * f2 * area_t;
      ev.area_grad(s.active_index(e_in), lab[a]) += d2 * f1 * area_t;
    }
    return std::array<double, 3>{corner, d1 * f2 * area_t, d2 * f1 * area_t};
  };

  for (int t : s.mixed_triangles()) {
    const auto& tri = mesh.triangles()[t];
    const auto& te = mesh.triangle_edges(t);
    const int nd = distinct(lab[tri[0]], lab[tri[1]], lab[tri[2]]);
    const double area_t = mesh.triangle_area(t);
    if (nd == 2) {
      int k = 0;
      while (lab[tri[k]] == lab[tri[(k + 1) % 3]] || lab[tri[k]] == lab[tri[(k + 2) % 3]]) ++k;
      const int lone = lab[tri[k]];
      const int other = lab[tri[(k + 1) % 3]];
      const auto c = add_corner(t, k, area_t);
      ev.areas[other] += area_t - c[0];
      const int e_out = te[k];
      const int e_in = te[(k + 2) % 3];
      if (with_grad) {
        ev.area_grad(s.active_index(e_out), other) -= c[1];
        ev.area_grad(s.active_index(e_in), other) -= c[2];
      }
      const Vec3 p = s.crossing_point(e_out);
      const Vec3 q = s.crossing_point(e_in);
      const double len = (p - q).norm();
      ev.perimeter += len;
      ev.cell_perimeter[lone] += len;
      ev.cell_perimeter[other] += len;
      if (with_grad) {
        Vec3 dir = p - q;
        double dl = len;
        if (len < kZeroSegment) {
          // Not differentiable at zero length: take the gradient at a
          // nearby point.
          ++ev.zero_segments;
          const auto& vo = mesh.edges()[e_out].v;
          dir += 1e-9 * (mesh.vertices()[vo[0]] - mesh.vertices()[vo[1]]);
          dl = dir.norm();
        }
        if (dl > 0) {
          const auto& vo = mesh.edges()[e_out].v;
          const auto& vi = mesh.edges()[e_in].v;
          ev.perimeter_grad[s.active_index(e_out)] +=
              dir.dot(mesh.vertices()[vo[0]] - mesh.vertices()[vo[1]]) / dl;
          ev.perimeter_grad[s.active_index(e_in)] -=
              dir.dot(mesh.vertices()[vi[0]] - mesh.vertices()[vi[1]]) / dl;
        }
      }
      continue;
    }
    // Triple void: corners analytic, inner triangle split at the Fermat point.
    for (int k = 0; k < 3; ++k) add_corner(t, k, area_t);
    const auto pts = void_points(s, t, {0, 0, 0});
    const FermatGeometry g = fermat_geometry(pts);
    ev.perimeter += g.star;
    for (int k = 0; k < 3; ++k) {
      ev.areas[lab[tri[k]]] += g.area[k];
      ev.cell_perimeter[lab[tri[k]]] += (pts[k] - g.x).norm() + (pts[(k + 2) % 3] - g.x).norm();
    }
    if (with_grad) {
      for (int j = 0; j < 3; ++j) {
        std::array<double, 3> sp{0, 0, 0}, sm{0, 0, 0};
        sp[j] = kFdStep;
        sm[j] = -kFdStep;
        const FermatGeometry gp = fermat_geometry(void_points(s, t, sp));
        const FermatGeometry gm = fermat_geometry(void_points(s, t, sm));
        const int idx = s.active_index(te[j]);
        ev.perimeter_grad[idx] += (gp.star - gm.star) / (2 * kFdStep);
        for (int k = 0; k < 3; ++k)
          ev.area_grad(idx, lab[tri[k]]) += (gp.area[k] - gm.area[k]) / (2 * kFdStep);
      }
    }
  }
  return ev;
}

Eigen::VectorXd scatter(const MeshPartitionState& s, const Eigen::VectorXd& active) {
  Eigen::VectorXd full = Eigen::VectorXd::Zero(s.mesh().edge_count());
  for (std::size_t k = 0; k < s.active_edges().size(); ++k)
    full[s.active_edges()[k]] = active[static_cast<Eigen::Index>(k)];
  return full;
}

}  // namespace

ScalarWithGradient perimeter_with_grad(const MeshPartitionState& state) {
  const Evaluation ev = evaluate(state, true);
  if (ev.zero_segments > 0)
    std::cerr << "warning: " << ev.zero_segments << " zero-length interface segment(s)\n";
  return {ev.perimeter, scatter(state, ev.perimeter_grad)};
}

ScalarWithGradient area_with_grad(const MeshPartitionState& state, int cell) {
  if (cell < 0 || cell >= state.phases()) throw std::out_of_range("cell index");
  const Evaluation ev = evaluate(state, true);
  return {ev.areas[cell], scatter(state, ev.area_grad.col(cell))};
}

std::vector<double> cell_perimeters(const MeshPartitionState& state) {
  return evaluate(state, false).cell_perimeter;
}

std::vector<double> cell_areas(const MeshPartitionState& state) {
  return evaluate(state, false).areas;
}

FermatContribution fermat_contrib(const MeshPartitionState& state, int triangle) {
  const auto& tri = state.mesh().triangles()[triangle];
  FermatContribution fc;
  fc.triangle = triangle;
  for (int k = 0; k < 3; ++k) fc.cells[k] = state.labels()[tri[k]];
  fc.points = void_points(state, triangle, {0, 0, 0});
  const FermatGeometry g = fermat_geometry(fc.points);
  if (g.degenerate)
    std::cerr << "warning: collinear crossing points in void triangle " << triangle << '\n';
  fc.fermat = g.x;
  fc.area = g.area;
  fc.length = g.length;
  fc.star_length = g.star;
  fc.degenerate = g.degenerate;
  for (int j = 0; j < 3; ++j) {
    std::array<double, 3> sp{0, 0, 0}, sm{0, 0, 0};
    sp[j] = kFdStep;
    sm[j] = -kFdStep;
    const FermatGeometry gp = fermat_geometry(void_points(state, triangle, sp));
    const FermatGeometry gm = fermat_geometry(void_points(state, triangle, sm));
    for (int k = 0; k < 3; ++k) {
      fc.area_grad[k][j] = (gp.area[k] - gm.area[k]) / (2 * kFdStep);
      fc.length_grad[k][j] = (gp.length[k] - gm.length[k]) / (2 * kFdStep);
    }
    fc.star_grad[j] = (gp.star - gm.star) / (2 * kFdStep);
  }
  return fc;
}

namespace {

Eigen::VectorXd clamp01(const Eigen::VectorXd& x) { return x.cwiseMax(0.0).cwiseMin(1.0); }

struct AugmentedLagrangian {
  MeshPartitionState& state;
  Eigen::VectorXd mu;
  double rho = 10.0;
  double target = 0.0;
  Eigen::VectorXd last_c;
  double last_perimeter = 0.0;

  double operator()(const Eigen::VectorXd& x, Eigen::VectorXd& g) {
    state.set_active_parameters(x);
    const Evaluation ev = evaluate(state, true);
    Eigen::VectorXd c(state.phases());
    for (int i = 0; i < state.phases(); ++i) c[i] = ev.areas[i] - target;
    const Eigen::VectorXd w = mu + rho * c;
    g = ev.perimeter_grad + ev.area_grad * w;
    last_c = c;
    last_perimeter = ev.perimeter;
    return ev.perimeter + mu.dot(c) + 0.5 * rho * c.squaredNorm();
  }
};

double projected_gradient_norm(const Eigen::VectorXd& x, const Eigen::VectorXd& g) {
  if (x.size() == 0) return 0.0;
  return (clamp01(x - g) - x).cwiseAbs().maxCoeff();
}

// Bound-constrained L-BFGS: variables held at a bound by the gradient are
// frozen for the step, the rest follow the two-loop direction, and trial
// points are clamped into the box.
struct BoxResult {
  int iterations = 0;
  bool stalled = false;  // no measurable progress; typical at kinks of the Fermat star
};

BoxResult minimize_box(AugmentedLagrangian& f, Eigen::VectorXd& x, double tol, int max_iter, int memory) {
  BoxResult out;
  Eigen::VectorXd g;
  double fx = f(x, g);
  std::deque<double> recent{fx};
  std::deque<Eigen::VectorXd> s_hist, y_hist;
  std::deque<double> rho_hist;
  int it = 0;
  for (; it < max_iter; ++it) {
    if (projected_gradient_norm(x, g) < tol) break;
    Eigen::ArrayXd fixed = Eigen::ArrayXd::Zero(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      if ((x[i] <= 0.0 && g[i] > 0.0) || (x[i] >= 1.0 && g[i] < 0.0)) fixed[i] = 1.0;
    }
    const Eigen::VectorXd gf = (g.array() * (1.0 - fixed)).matrix();
    Eigen::VectorXd d = -gf;
    std::vector<double> alpha(s_hist.size());
    for (int k = static_cast<int>(s_hist.size()) - 1; k >= 0; --k) {
      alpha[k] = rho_hist[k] * s_hist[k].dot(d);
      d -= alpha[k] * y_hist[k];
    }
    if (!s_hist.empty()) d *= s_hist.back().dot(y_hist.back()) / y_hist.back().squaredNorm();
    for (std::size_t k = 0; k < s_hist.size(); ++k) {
      const double beta = rho_hist[k] * y_hist[k].dot(d);
      d += (alpha[k] - beta) * s_hist[k];
    }
    d = (d.array() * (1.0 - fixed)).matrix();
    if (!(d.dot(gf) < 0.0)) {
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
      d = -gf;
    }
    const double dmax = d.cwiseAbs().maxCoeff();
    if (dmax == 0.0) break;
    double t = s_hist.empty() ? std::min(1.0, 0.05 / dmax) : std::min(1.0, 0.5 / dmax);
    Eigen::VectorXd xt, gt;
    double ft = 0.0;
    bool ok = false;
    for (int ls = 0; ls < 50; ++ls) {
      xt = clamp01(x + t * d);
      ft = f(xt, gt);
      if (ft <= fx + 1e-4 * g.dot(xt - x)) {
        ok = true;
        break;
      }
      t *= 0.5;
    }
    if (!ok) {
      f(x, g);  // restore the state's parameters
      out.stalled = true;
      break;
    }
    Eigen::VectorXd s = xt - x;
    Eigen::VectorXd y = gt - g;
    const double sy = s.dot(y);
    if (sy > 1e-14 * s.norm() * y.norm() && sy > 0) {
      if (static_cast<int>(s_hist.size()) == memory) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
      s_hist.push_back(std::move(s));
      y_hist.push_back(std::move(y));
      rho_hist.push_back(1.0 / sy);
    }
    x = std::move(xt);
    g = std::move(gt);
    fx = ft;
    recent.push_back(fx);
    if (recent.size() > 20) {
      recent.pop_front();
      if (recent.front() - fx <= 1e-13 * std::max(1.0, std::abs(fx))) {
        out.stalled = true;
        ++it;
        break;
      }
    }
  }
  out.iterations = it;
  return out;
}

}  // namespace

ConstrainedResult constrained_minimize(const MeshPartitionState& state, const ConstrainedOptions& opts) {
  ConstrainedResult res{state, 0.0, 0.0, 0.0, 0.0, 0, 0, false, {}};
  MeshPartitionState& s = res.state;
  res.initial_perimeter = evaluate(s, false).perimeter;

  AugmentedLagrangian al{s, Eigen::VectorXd::Zero(s.phases()), 10.0, s.target_area(), {}, 0.0};
  Eigen::VectorXd x = clamp01(s.active_parameters());
  const double area_tol = opts.area_tolerance * s.mesh_area();
  double prev_violation = std::numeric_limits<double>::infinity();
  double inner_tol = 1e-3;

  for (int outer = 0; outer < opts.max_outer; ++outer) {
    res.outer_iterations = outer + 1;
    const BoxResult inner = minimize_box(al, x, inner_tol, opts.max_inner, opts.memory);
    res.inner_iterations += inner.iterations;
    Eigen::VectorXd g;
    al(x, g);
    const double violation = al.last_c.cwiseAbs().maxCoeff();
    res.stationarity = projected_gradient_norm(x, g);
    if (std::getenv("GEOPART_DEBUG"))
      std::cerr << "outer " << outer << " L=" << al.last_perimeter << " viol=" << violation
                << " stat=" << res.stationarity << " rho=" << al.rho << " inner=" << res.inner_iterations << '\n';
    if (violation < area_tol &&
        (res.stationarity < opts.stationarity_tolerance || (inner.stalled && inner_tol <= opts.stationarity_tolerance))) {
      res.converged = true;
      break;
    }
    al.mu += al.rho * al.last_c;
    if (violation > 0.25 * prev_violation) al.rho = std::min(al.rho * 10.0, 1e10);
    prev_violation = violation;
    inner_tol = std::max(opts.stationarity_tolerance, inner_tol * 0.1);
  }
  s.set_active_parameters(x);
  const Evaluation ev = evaluate(s, false);
  res.perimeter = ev.perimeter;
  res.max_area_residual = 0.0;
  for (double a : ev.areas) res.max_area_residual = std::max(res.max_area_residual, std::abs(a - s.target_area()));
  if (!res.converged) {
    res.message = res.max_area_residual < area_tol ? "stationarity tolerance not reached"
                                                   : "area constraints not met (possibly infeasible)";
  }
  return res;
}

SwitchResult switch_restart(const MeshPartitionState& state, double tolerance) {
  SwitchResult out{state, false, {}};
  const SurfaceMesh& mesh = state.mesh();
  const auto& lab = state.labels();
  std::map<int, int> moves;

  // Rule 1: a crossing point sitting on a vertex hands that vertex over.
  for (int e : state.active_edges()) {
    const auto& v = mesh.edges()[e].v;
    const double l = state.lambda()[e];
    if (l <= tolerance) moves.emplace(v[1], lab[v[0]]);
    else if (l >= 1.0 - tolerance) moves.emplace(v[0], lab[v[1]]);
  }

  // Rule 2: a Fermat point reaching its triangle's boundary lets the
  // junction cross that edge.
  if (moves.empty()) {
    for (int t : state.void_triangles()) {
      const auto& tri = mesh.triangles()[t];
      const auto& te = mesh.triangle_edges(t);
      const auto p = void_points(state, t, {0, 0, 0});
      const Vec3 x = fermat_point(p[0], p[1], p[2]);
      for (int k = 0; k < 3; ++k) {
        if ((x - p[k]).norm() > tolerance * mesh.edge_length(te[k])) continue;
        const int a = tri[k];
        const int b = tri[(k + 1) % 3];
        const int opposite = lab[tri[(k + 2) % 3]];
        const double from_a = fraction_from(state, a, te[k]).first;
        moves.emplace(from_a <= 0.5 ? a : b, opposite);
        break;
      }
    }
  }

  std::vector<std::pair<int, int>> pairs;
  for (const auto& [v, l] : moves) {
    if (lab[v] != l) pairs.emplace_back(v, l);
  }
  if (pairs.empty()) return out;
  out.state.relabel(pairs);
  out.switched = true;
  for (const auto& pr : pairs) out.relabeled_vertices.push_back(pr.first);
  return out;
}

RefineOutcome refine_on_mesh(const MeshPartitionState& initial, const RefineOptions& opts) {
  RefineReport rep;
  rep.raw_length = evaluate(initial, false).perimeter;
  ConstrainedResult best = constrained_minimize(initial, opts.solver);
  rep.perimeter_history.push_back(best.perimeter);
  rep.message = best.message;

  for (int r = 0; r < opts.max_restarts; ++r) {
    SwitchResult sw = switch_restart(best.state, opts.switch_tolerance);
    if (!sw.switched) break;
    ++rep.restarts;
    ConstrainedResult cand = constrained_minimize(sw.state, opts.solver);
    const bool feasible = cand.max_area_residual <= std::max(best.max_area_residual,
                                                             opts.solver.area_tolerance * initial.mesh_area());
    if (!(feasible && cand.perimeter < best.perimeter)) {
      rep.message = "switch did not improve the perimeter; kept previous configuration";
      break;
    }
    best = std::move(cand);
    rep.perimeter_history.push_back(best.perimeter);
    rep.message = best.message;
    if (r + 1 == opts.max_restarts) rep.message = "stopped at the restart cap";
  }

  const Evaluation ev = evaluate(best.state, false);
  rep.single_count_length = ev.perimeter;
  rep.double_count_length = 2.0 * ev.perimeter;
  rep.cell_areas = ev.areas;
  rep.cell_perimeters = ev.cell_perimeter;
  rep.max_area_residual = best.max_area_residual;
  return {std::move(best.state), std::move(rep)};
}

void write_refine_report(const RefineReport& rep, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << std::setprecision(12);
  out << "single_count_length " << rep.single_count_length << '\n';
  out << "double_count_length " << rep.double_count_length << '\n';
  out << "raw_length " << rep.raw_length << '\n';
  out << "max_area_residual " << rep.max_area_residual << '\n';
  out << "restarts " << rep.restarts << '\n';
  out << "cells " << rep.cell_areas.size() << '\n';
  for (std::size_t i = 0; i < rep.cell_areas.size(); ++i)
    out << "cell " << i << " area " << rep.cell_areas[i] << " perimeter " << rep.cell_perimeters[i] << '\n';
  out << "history";
  for (double p : rep.perimeter_history) out << ' ' << p;
  out << '\n';
  if (!rep.message.empty()) out << "message " << rep.message << '\n';
}

void write_polylines_obj(const MeshPartitionState& state, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << std::setprecision(17);
  const SurfaceMesh& mesh = state.mesh();
  const auto& lab = state.labels();
  std::vector<int> vid(mesh.edge_count(), 0);
  int next = 1;
  for (int e : state.active_edges()) {
    const Vec3 p = state.crossing_point(e);
    out << "v " << p.x() << ' ' << p.y() << ' ' << p.z() << '\n';
    vid[e] = next++;
  }
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const auto& tri = mesh.triangles()[t];
    const auto& te = mesh.triangle_edges(t);
    const int nd = distinct(lab[tri[0]], lab[tri[1]], lab[tri[2]]);
    if (nd == 2) {
      std::vector<int> cut;
      for (int k = 0; k < 3; ++k) {
        if (lab[tri[k]] != lab[tri[(k + 1) % 3]]) cut.push_back(te[k]);
      }
      out << "l " << vid[cut[0]] << ' ' << vid[cut[1]] << '\n';
    } else if (nd == 3) {
      const auto p = void_points(state, t, {0, 0, 0});
      const Vec3 x = fermat_point(p[0], p[1], p[2]);
      out << "v " << x.x() << ' ' << x.y() << ' ' << x.z() << '\n';
      const int xi = next++;
      for (int k = 0; k < 3; ++k) out << "l " << vid[te[k]] << ' ' << xi << '\n';
    }
  }
}

}  // namespace geopart
