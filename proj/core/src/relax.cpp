#include "geopart/relax.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <random>
#include <stdexcept>

namespace geopart {

namespace {

double dot(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a.array() * b.array()).sum();
}

}  // namespace

LevelOperators LevelOperators::assemble(const SurfaceMesh& mesh) {
  LevelOperators ops;
  ops.mass = assemble_mass(mesh);
  ops.stiffness = assemble_stiffness(mesh);
  ops.weights = lumped_weights(ops.mass);
  ops.area = ops.weights.sum();
  return ops;
}

double default_starget(int phases) {
  const double p = 1.0 / phases;
  return std::sqrt(p * (1.0 - p));
}

double weighted_std(const Eigen::VectorXd& phi, const Eigen::VectorXd& weights, double area) {
  const double mean = weights.dot(phi) / area;
  return std::sqrt(weights.dot((phi.array() - mean).square().matrix()) / area);
}

double energy_and_gradient(const DensityMatrix& u, const LevelOperators& ops,
                           const EnergyParams& p, DensityMatrix& grad) {
  const DensityMatrix ku = ops.stiffness * u;
  const DensityMatrix q = (u.array() * (1.0 - u.array())).matrix();
  const DensityMatrix mq = ops.mass * q;
  double e = p.eps * dot(u, ku) + dot(q, mq) / p.eps;
  grad = 2.0 * p.eps * ku;
  grad.array() += (2.0 / p.eps) * mq.array() * (1.0 - 2.0 * u.array());

  if (p.penalty != 0.0) {
    for (Eigen::Index j = 0; j < u.cols(); ++j) {
      const double mean = ops.weights.dot(u.col(j)) / ops.area;
      const Eigen::ArrayXd centred = u.col(j).array() - mean;
      const double sd = std::sqrt((ops.weights.array() * centred.square()).sum() / ops.area);
      const double gap = sd - p.starget;
      e += p.penalty * gap * gap;
      if (sd > 0.0) {
        // d sd / d u_k = v_k (u_k - mean) / (A sd); the mean's own derivative
        // drops out because <v, u - mean> = 0.
        grad.col(j).array() +=
            (2.0 * p.penalty * gap / (ops.area * sd)) * ops.weights.array() * centred;
      }
    }
  }
  return e;
}

double energy(const DensityMatrix& u, const LevelOperators& ops, const EnergyParams& p) {
  DensityMatrix g;
  return energy_and_gradient(u, ops, p, g);
}

DensityMatrix gradient(const DensityMatrix& u, const LevelOperators& ops, const EnergyParams& p) {
  DensityMatrix g;
  energy_and_gradient(u, ops, p, g);
  return g;
}

DensityMatrix project(const DensityMatrix& a, const Eigen::VectorXd& row_targets,
                      const Eigen::VectorXd& col_targets, const Eigen::VectorXd& weights) {
  const Eigen::Index rows = a.rows();
  const Eigen::Index n = a.cols();
  if (row_targets.size() != rows || col_targets.size() != n || weights.size() != rows)
    throw std::invalid_argument("project: dimension mismatch");
  const double vv = weights.squaredNorm();
  if (!(vv > 0.0)) throw std::invalid_argument("project: all weights vanish");

  // Correction has the form mu_i + v_i lambda_j (KKT of the Euclidean
  // projection). Row constraints give mu = (e - S v)/n with S = sum(lambda);
  // the column constraints leave vv (I - J/n) lambda = q, singular along the
  // constants, gauge-fixed with lambda_n = 0. The leading block inverts to
  // (I + J)/vv.
  const Eigen::VectorXd e = a.rowwise().sum() - row_targets;
  const Eigen::VectorXd f = a.transpose() * weights - col_targets;
  const Eigen::VectorXd q = f.array() - weights.dot(e) / static_cast<double>(n);
  Eigen::VectorXd lambda = Eigen::VectorXd::Zero(n);
  const double head = q.head(n - 1).sum();
  lambda.head(n - 1) = (q.head(n - 1).array() + head) / vv;
  const double s = lambda.sum();
  const Eigen::VectorXd eta = (e - s * weights) / static_cast<double>(n);

  DensityMatrix out = a;
  out.colwise() -= eta;
  out.noalias() -= weights * lambda.transpose();
  return out;
}

DensityMatrix project_partition(const DensityMatrix& a, const Eigen::VectorXd& weights,
                                double area) {
  const Eigen::Index n = a.cols();
  return project(a, Eigen::VectorXd::Ones(a.rows()),
                 Eigen::VectorXd::Constant(n, area / static_cast<double>(n)), weights);
}

DensityMatrix project_tangent(const DensityMatrix& a, const Eigen::VectorXd& weights) {
  return project(a, Eigen::VectorXd::Zero(a.rows()), Eigen::VectorXd::Zero(a.cols()), weights);
}

ConstraintResiduals partition_residuals(const DensityMatrix& u, const Eigen::VectorXd& weights,
                                        double area) {
  ConstraintResiduals r;
  r.row = (u.rowwise().sum().array() - 1.0).abs().maxCoeff();
  r.column = ((u.transpose() * weights).array() - area / static_cast<double>(u.cols()))
                 .abs()
                 .maxCoeff();
  return r;
}

DensityMatrix random_init(int vertices, int phases, std::uint64_t seed,
                          const Eigen::VectorXd& weights, double area) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  DensityMatrix u(vertices, phases);
  // Column-major fill order is part of the reproducibility contract.
  for (int j = 0; j < phases; ++j)
    for (int i = 0; i < vertices; ++i) u(i, j) = uni(rng);
  return project_partition(u, weights, area);
}

MinimizeResult minimize(const DensityMatrix& u0, const LevelOperators& ops, const EnergyParams& p,
                        const MinimizeOptions& opts) {
  MinimizeResult res;
  DensityMatrix x = u0;
  DensityMatrix g;
  double fx = energy_and_gradient(x, ops, p, g);
  if (!std::isfinite(fx)) throw std::runtime_error("relax: non-finite initial energy");
  g = project_tangent(g, ops.weights);
  res.initial_energy = fx;
  res.max_residuals = partition_residuals(x, ops.weights, ops.area);
  if (opts.record_trace) res.energy_trace.push_back(fx);

  std::deque<DensityMatrix> s_hist, y_hist;
  std::deque<double> rho_hist;
  std::vector<double> recent{fx};
  const double tol = opts.gradient_tolerance * ops.area;
  res.stop_reason = "max-iterations";

  DensityMatrix d, x_new, g_new;
  int it = 0;
  for (; it < opts.max_iterations; ++it) {
    const double gnorm = g.norm();
    if (gnorm < tol) {
      res.stop_reason = "gradient-tolerance";
      break;
    }

    // Two-loop recursion; every stored pair lives in the tangent space, so
    // the direction does too.
    d = -g;
    std::vector<double> alpha(s_hist.size());
    for (int k = static_cast<int>(s_hist.size()) - 1; k >= 0; --k) {
      alpha[k] = rho_hist[k] * dot(s_hist[k], d);
      d -= alpha[k] * y_hist[k];
    }
    if (!s_hist.empty()) {
      d *= dot(s_hist.back(), y_hist.back()) / y_hist.back().squaredNorm();
    } else {
      d *= 0.1 / std::max(g.cwiseAbs().maxCoeff(), 1e-300);
    }
    for (std::size_t k = 0; k < s_hist.size(); ++k) {
      const double beta = rho_hist[k] * dot(y_hist[k], d);
      d += (alpha[k] - beta) * s_hist[k];
    }
    double slope = dot(g, d);
    if (!(slope < 0.0)) {
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
      d = -g * (0.1 / std::max(g.cwiseAbs().maxCoeff(), 1e-300));
      slope = dot(g, d);
    }

    double t = std::min(1.0, 0.5 / std::max(d.cwiseAbs().maxCoeff(), 1e-300));
    double f_new = 0.0;
    bool accepted = false;
    for (int ls = 0; ls < 40; ++ls) {
      x_new = project_partition(x + t * d, ops.weights, ops.area);
      f_new = energy_and_gradient(x_new, ops, p, g_new);
      if (!std::isfinite(f_new)) throw std::runtime_error("relax: non-finite energy during descent");
      if (f_new <= fx + 1e-4 * t * slope) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) {
      res.stop_reason = "line-search";
      break;
    }
    g_new = project_tangent(g_new, ops.weights);

    DensityMatrix s = x_new - x;
    DensityMatrix y = g_new - g;
    const double sy = dot(s, y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      if (static_cast<int>(s_hist.size()) == opts.memory) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
      s_hist.push_back(std::move(s));
      y_hist.push_back(std::move(y));
      rho_hist.push_back(1.0 / sy);
    }
    std::swap(x, x_new);
    std::swap(g, g_new);
    fx = f_new;

    const auto r = partition_residuals(x, ops.weights, ops.area);
    res.max_residuals.row = std::max(res.max_residuals.row, r.row);
    res.max_residuals.column = std::max(res.max_residuals.column, r.column);
    if (opts.record_trace) res.energy_trace.push_back(fx);
    recent.push_back(fx);
    const int w = opts.stagnation_window;
    if (w > 0 && static_cast<int>(recent.size()) > w) {
      if (recent[recent.size() - 1 - w] - fx < opts.stagnation_tolerance) {
        ++it;
        res.stop_reason = "stagnation";
        break;
      }
    }
  }
  res.u = std::move(x);
  res.energy = fx;
  res.gradient_norm = g.norm();
  res.iterations = it;
  return res;
}

ContinuationResult continuation(const SurfaceMesh& initial, const RelaxConfig& config, int levels) {
  if (levels < 1) throw std::invalid_argument("continuation needs at least one level");
  if (config.phases < 2) throw std::invalid_argument("need at least two phases");

  ContinuationResult out{DensityMatrix(), initial, 0.0, 0.0, {}};
  out.starget = config.starget >= 0 ? config.starget : default_starget(config.phases);

  DensityMatrix u;
  for (int level = 0; level < levels; ++level) {
    Prolongation pro;
    if (level > 0) {
      auto r = refine(out.mesh);
      out.mesh = std::move(r.mesh);
      pro = std::move(r.prolongation);
    }
    const LevelOperators ops = LevelOperators::assemble(out.mesh);
    EnergyParams params;
    params.eps = level < static_cast<int>(config.eps_schedule.size())
                     ? config.eps_schedule[level]
                     : mesh_statistics(out.mesh).mean_edge_length;
    if (!(params.eps > 0)) throw std::invalid_argument("eps must be positive");
    params.starget = out.starget;

    if (level == 0) {
      u = random_init(out.mesh.vertex_count(), config.phases, config.seed, ops.weights, ops.area);
      if (config.penalty >= 0) {
        out.penalty = config.penalty;
      } else {
        EnergyParams bare = params;
        bare.penalty = 0.0;
        out.penalty = 0.01 * energy(u, ops, bare) / (out.starget * out.starget);
      }
    } else {
      u = project_partition(pro.apply(u), ops.weights, ops.area);
    }
    params.penalty = out.penalty;

    MinimizeOptions opts = config.lbfgs;
    if (level < static_cast<int>(config.level_max_iterations.size()))
      opts.max_iterations = config.level_max_iterations[level];
    auto res = minimize(u, ops, params, opts);
    u = std::move(res.u);

    LevelReport rep;
    rep.vertices = out.mesh.vertex_count();
    rep.eps = params.eps;
    rep.initial_energy = res.initial_energy;
    rep.energy = res.energy;
    rep.iterations = res.iterations;
    rep.stop_reason = res.stop_reason;
    rep.residuals = partition_residuals(u, ops.weights, ops.area);
    out.levels.push_back(rep);
  }
  out.u = std::move(u);
  return out;
}

}  // namespace geopart
