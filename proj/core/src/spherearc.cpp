#include "geopart/spherearc.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include <Eigen/Geometry>

namespace geopart {

namespace {

constexpr double kPi = std::numbers::pi;

Vec3 rotate_about(const Vec3& axis, const Vec3& v, double angle) {
  return std::cos(angle) * v + std::sin(angle) * axis.cross(v) + (1.0 - std::cos(angle)) * axis.dot(v) * axis;
}

// Point at fraction f of the way along the arc.
Vec3 arc_point(const ArcGeometry& g, const Vec3& p, double f) {
  const Vec3 c = g.height * g.axis;
  return (c + rotate_about(g.axis, p - c, f * g.sweep)).normalized();
}

}  // namespace

ArcGeometry arc_geometry(const Vec3& p, const Vec3& m, const Vec3& q, bool reversed) {
  if ((p - m).norm() < 1e-14 || (m - q).norm() < 1e-14 || (p - q).norm() < 1e-14)
    throw ArcError("arc through coincident points");
  const Vec3 n = (m - p).cross(q - m);
  const double nn = n.norm();
  if (!(nn > 1e-15)) throw ArcError("degenerate arc");
  ArcGeometry g;
  g.axis = n / nn;
  g.height = (g.axis.dot(p) + g.axis.dot(m) + g.axis.dot(q)) / 3.0;
  const double r = std::sqrt(std::max(0.0, 1.0 - g.height * g.height));
  if (!(r > 1e-12)) throw ArcError("arc on a vanishing circle");
  const Vec3 c = g.height * g.axis;
  const Vec3 u = p - c;
  const Vec3 w = q - c;
  double phi = std::atan2(g.axis.dot(u.cross(w)), u.dot(w));
  if (phi <= 0.0) phi += 2.0 * kPi;
  g.sweep = phi;
  g.rho = std::acos(std::min(1.0, std::abs(g.height)));
  g.length = r * phi;
  g.kg = g.height / r;
  g.kg_integral = g.height * phi;
  g.tangent_start = g.axis.cross(p).normalized();
  g.tangent_end = g.axis.cross(q).normalized();
  return reversed ? reverse(g) : g;
}

ArcGeometry reverse(const ArcGeometry& g) {
  ArcGeometry r = g;
  r.axis = -g.axis;
  r.height = -g.height;
  r.kg = -g.kg;
  r.kg_integral = -g.kg_integral;
  r.tangent_start = -g.tangent_end;
  r.tangent_end = -g.tangent_start;
  return r;
}

double turning_angle(const Vec3& corner, const Vec3& t_in, const Vec3& t_out) {
  return std::atan2(corner.dot(t_in.cross(t_out)), t_in.dot(t_out));
}

namespace {

// Face areas from cached forward arc geometry.
double face_area_cached(const Face& face, const std::vector<ArcGeometry>& geo, const ArcPartition& part) {
  double total = 2.0 * kPi * face.euler;
  for (const auto& loop : face.loops) {
    const std::size_t k = loop.size();
    for (std::size_t i = 0; i < k; ++i) {
      const ArcUse& a = loop[i];
      const ArcUse& b = loop[(i + 1) % k];
      const ArcGeometry& ga = geo[a.arc];
      const ArcGeometry& gb = geo[b.arc];
      total -= a.reversed ? -ga.kg_integral : ga.kg_integral;
      const Vec3 t_in = a.reversed ? Vec3(-ga.tangent_start) : ga.tangent_end;
      const Vec3 t_out = b.reversed ? Vec3(-gb.tangent_end) : gb.tangent_start;
      const Arc& arc = part.arcs[a.arc];
      const Vec3& corner = part.nodes[a.reversed ? arc.start : arc.end];
      total -= turning_angle(corner, t_in, t_out);
    }
  }
  if (!(total > -1e-9 && total < 4.0 * kPi))
    throw ArcError("face area outside [0, 4 pi): inconsistent orientation");
  return std::max(total, 0.0);
}

std::vector<ArcGeometry> all_geometry(const ArcPartition& p) {
  std::vector<ArcGeometry> geo;
  geo.reserve(p.arcs.size());
  for (const auto& a : p.arcs) geo.push_back(arc_geometry(p.nodes[a.start], p.nodes[a.mid], p.nodes[a.end]));
  return geo;
}

double penalty_sum(const std::vector<double>& areas) {
  double s = 0.0;
  for (std::size_t i = 0; i < areas.size(); ++i)
    for (std::size_t j = i + 1; j < areas.size(); ++j) s += (areas[i] - areas[j]) * (areas[i] - areas[j]);
  return s;
}

}  // namespace

void ArcPartition::validate() const {
  if (kinds.size() != nodes.size()) throw std::invalid_argument("node kinds do not match nodes");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (std::abs(nodes[i].norm() - 1.0) > 1e-12)
      throw std::invalid_argument("node " + std::to_string(i) + " is off the unit sphere");
  }
  std::vector<int> degree(nodes.size(), 0);
  for (const auto& a : arcs) {
    for (int v : {a.start, a.mid, a.end}) {
      if (v < 0 || v >= static_cast<int>(nodes.size())) throw std::invalid_argument("arc node out of range");
    }
    if (kinds[a.mid] != NodeKind::Midpoint) throw std::invalid_argument("arc middle is not a midpoint node");
    ++degree[a.start];
    ++degree[a.end];
  }
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (kinds[i] == NodeKind::Triple && degree[i] != 3)
      throw std::invalid_argument("triple point " + std::to_string(i) + " has degree " + std::to_string(degree[i]));
    if (kinds[i] == NodeKind::Auxiliary && degree[i] != 2)
      throw std::invalid_argument("auxiliary node " + std::to_string(i) + " has degree " + std::to_string(degree[i]));
  }
  std::vector<int> forward(arcs.size(), 0), backward(arcs.size(), 0);
  for (const auto& f : faces) {
    for (const auto& loop : f.loops) {
      if (loop.empty()) throw std::invalid_argument("empty face loop");
      for (std::size_t i = 0; i < loop.size(); ++i) {
        const ArcUse& a = loop[i];
        const ArcUse& b = loop[(i + 1) % loop.size()];
        if (a.arc < 0 || a.arc >= static_cast<int>(arcs.size())) throw std::invalid_argument("face arc out of range");
        (a.reversed ? backward : forward)[a.arc]++;
        const int a_end = a.reversed ? arcs[a.arc].start : arcs[a.arc].end;
        const int b_start = b.reversed ? arcs[b.arc].end : arcs[b.arc].start;
        if (a_end != b_start) throw std::invalid_argument("face loop does not close");
      }
    }
  }
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    if (forward[i] != 1 || backward[i] != 1)
      throw std::invalid_argument("arc " + std::to_string(i) + " does not border exactly two faces");
  }
}

double face_area(const ArcPartition& partition, int face) {
  return face_area_cached(partition.faces.at(face), all_geometry(partition), partition);
}

std::vector<double> face_areas(const ArcPartition& partition) {
  const auto geo = all_geometry(partition);
  std::vector<double> out;
  for (const auto& f : partition.faces) out.push_back(face_area_cached(f, geo, partition));
  return out;
}

double single_count_length(const ArcPartition& partition) {
  double s = 0.0;
  for (const auto& g : all_geometry(partition)) s += g.length;
  return s;
}

double cost(const ArcPartition& partition, double eps) {
  return 2.0 * single_count_length(partition) + penalty_sum(face_areas(partition)) / eps;
}

double max_area_difference(const std::vector<double>& areas) {
  if (areas.empty()) return 0.0;
  const auto [lo, hi] = std::minmax_element(areas.begin(), areas.end());
  return *hi - *lo;
}

namespace {

std::pair<Vec3, Vec3> tangent_basis(const Vec3& x) {
  Eigen::Index k = 0;
  x.cwiseAbs().minCoeff(&k);
  Vec3 ref = Vec3::Zero();
  ref[k] = 1.0;
  const Vec3 e1 = x.cross(ref).normalized();
  return {e1, x.cross(e1)};
}

}  // namespace

std::vector<std::array<double, 3>> triple_point_angles(const ArcPartition& partition) {
  const auto geo = all_geometry(partition);
  std::vector<std::array<double, 3>> out;
  for (std::size_t v = 0; v < partition.nodes.size(); ++v) {
    if (partition.kinds[v] != NodeKind::Triple) continue;
    const Vec3& x = partition.nodes[v];
    const auto [e1, e2] = tangent_basis(x);
    std::vector<double> dirs;
    for (std::size_t a = 0; a < partition.arcs.size(); ++a) {
      if (partition.arcs[a].start == static_cast<int>(v)) {
        dirs.push_back(std::atan2(geo[a].tangent_start.dot(e2), geo[a].tangent_start.dot(e1)));
      }
      if (partition.arcs[a].end == static_cast<int>(v)) {
        const Vec3 t = -geo[a].tangent_end;
        dirs.push_back(std::atan2(t.dot(e2), t.dot(e1)));
      }
    }
    if (dirs.size() != 3) throw std::invalid_argument("triple point without three arcs");
    std::sort(dirs.begin(), dirs.end());
    out.push_back({dirs[1] - dirs[0], dirs[2] - dirs[1], 2.0 * kPi - (dirs[2] - dirs[0])});
  }
  return out;
}

void recentre_midpoints(ArcPartition& partition) {
  for (const auto& a : partition.arcs) {
    const ArcGeometry g = arc_geometry(partition.nodes[a.start], partition.nodes[a.mid], partition.nodes[a.end]);
    partition.nodes[a.mid] = arc_point(g, partition.nodes[a.start], 0.5);
  }
}

ArcPartition lift_from_mesh(const PartitionTopology& topo, const SurfaceMesh& mesh, const Eigen::MatrixXd* densities) {
  for (const auto& x : mesh.vertices()) {
    if (std::abs(x.norm() - 1.0) > 1e-6) throw std::invalid_argument("lift_from_mesh needs a unit-sphere mesh");
  }
  if (static_cast<int>(topo.labels.size()) != mesh.vertex_count())
    throw std::invalid_argument("topology does not match the mesh");
  const auto& lab = topo.labels;

  auto crossing = [&](int e) -> Vec3 {
    const auto& v = mesh.edges()[e].v;
    double t = 0.5;
    if (densities) {
      const int a = lab[v[0]], b = lab[v[1]];
      const double d0 = (*densities)(v[0], a) - (*densities)(v[0], b);
      const double d1 = (*densities)(v[1], a) - (*densities)(v[1], b);
      if (d0 - d1 > 1e-300) t = std::clamp(d0 / (d0 - d1), 0.05, 0.95);
    }
    return ((1.0 - t) * mesh.vertices()[v[0]] + t * mesh.vertices()[v[1]]).normalized();
  };

  ArcPartition out;
  auto add_node = [&](const Vec3& x, NodeKind k) {
    out.nodes.push_back(x.normalized());
    out.kinds.push_back(k);
    return static_cast<int>(out.nodes.size()) - 1;
  };
  auto half_point = [](const std::vector<Vec3>& poly, std::size_t from, std::size_t to) {
    double total = 0.0;
    for (std::size_t i = from; i < to; ++i) total += (poly[i + 1] - poly[i]).norm();
    double acc = 0.0;
    for (std::size_t i = from; i < to; ++i) {
      const double seg = (poly[i + 1] - poly[i]).norm();
      if (acc + seg >= 0.5 * total && seg > 0) {
        const double f = (0.5 * total - acc) / seg;
        return Vec3(((1.0 - f) * poly[i] + f * poly[i + 1]).normalized());
      }
      acc += seg;
    }
    return Vec3(poly[to].normalized());
  };
  // Arcs along poly[0..] from node `first` to node `last`, optionally split
  // in the middle by an auxiliary node.
  auto add_chain = [&](const std::vector<Vec3>& poly, int first, int last, int pieces) {
    std::vector<int> arcs;
    std::vector<std::size_t> cut{0};
    std::vector<int> ends{first};
    const std::size_t n = poly.size() - 1;
    for (int k = 1; k < pieces; ++k) {
      const std::size_t idx = std::max<std::size_t>(1, n * k / pieces);
      cut.push_back(idx);
      ends.push_back(add_node(poly[idx], NodeKind::Auxiliary));
    }
    cut.push_back(n);
    ends.push_back(last);
    for (int k = 0; k < pieces; ++k) {
      const int mid = add_node(half_point(poly, cut[k], cut[k + 1]), NodeKind::Midpoint);
      out.arcs.push_back({ends[k], mid, ends[k + 1]});
      arcs.push_back(static_cast<int>(out.arcs.size()) - 1);
    }
    return arcs;
  };

  std::map<int, int> triple_node;
  for (const auto& v : topo.voids) {
    const auto& tri = mesh.triangles()[v.triangle];
    const Vec3 c = (mesh.vertices()[tri[0]] + mesh.vertices()[tri[1]] + mesh.vertices()[tri[2]]) / 3.0;
    triple_node[v.triangle] = add_node(c, NodeKind::Triple);
  }

  using Key = std::pair<std::pair<int, int>, std::pair<int, int>>;
  std::map<Key, std::vector<int>> pieces;  // arcs in the direction of first discovery
  std::map<int, std::vector<int>> closed;  // keyed by the smallest crossing edge

  const PhaseLabeling labeling{topo.phases, topo.labels};
  const std::vector<int> components = label_components(labeling, mesh);

  for (const auto& cell : topo.cells) {
    Face face;
    face.phase = cell.phase;
    face.euler = 2 * components[cell.phase] - static_cast<int>(cell.loops.size());
    for (const auto& loop : cell.loops) {
      const std::size_t k = loop.edges.size();
      std::vector<std::size_t> void_at;
      for (std::size_t i = 0; i < k; ++i) {
        if (triple_node.count(loop.triangles[i])) void_at.push_back(i);
      }
      std::vector<ArcUse> uses;
      if (void_at.empty()) {
        const int min_edge = *std::min_element(loop.edges.begin(), loop.edges.end());
        auto it = closed.find(min_edge);
        if (it == closed.end()) {
          const std::size_t start = std::find(loop.edges.begin(), loop.edges.end(), min_edge) - loop.edges.begin();
          std::vector<Vec3> poly;
          for (std::size_t i = 0; i <= k; ++i) poly.push_back(crossing(loop.edges[(start + i) % k]));
          const int anchor = add_node(poly.front(), NodeKind::Auxiliary);
          // Two arcs: anchor -> auxiliary -> anchor.
          const std::size_t half = std::max<std::size_t>(1, k / 2);
          const int aux = add_node(poly[half], NodeKind::Auxiliary);
          const int m0 = add_node(half_point(poly, 0, half), NodeKind::Midpoint);
          const int m1 = add_node(half_point(poly, half, k), NodeKind::Midpoint);
          out.arcs.push_back({anchor, m0, aux});
          out.arcs.push_back({aux, m1, anchor});
          const int a0 = static_cast<int>(out.arcs.size()) - 2;
          closed[min_edge] = {a0, a0 + 1};
          uses = {{a0, false}, {a0 + 1, false}};
        } else {
          for (auto r = it->second.rbegin(); r != it->second.rend(); ++r) uses.push_back({*r, true});
        }
      } else {
        for (std::size_t j = 0; j < void_at.size(); ++j) {
          const std::size_t from = void_at[j];
          std::size_t to = void_at[(j + 1) % void_at.size()];
          if (to <= from) to += k;
          const int t_from = loop.triangles[from];
          const int t_to = loop.triangles[to % k];
          const int e_first = loop.edges[(from + 1) % k];
          const int e_last = loop.edges[to % k];
          const std::pair<int, int> head{t_from, e_first}, tail{t_to, e_last};
          const Key key = head < tail ? Key{head, tail} : Key{tail, head};
          auto it = pieces.find(key);
          if (it == pieces.end()) {
            std::vector<Vec3> poly{out.nodes[triple_node[t_from]]};
            for (std::size_t i = from + 1; i <= to; ++i) poly.push_back(crossing(loop.edges[i % k]));
            poly.push_back(out.nodes[triple_node[t_to]]);
            const int split = t_from == t_to ? 2 : 1;
            auto arcs = add_chain(poly, triple_node[t_from], triple_node[t_to], split);
            pieces[key] = arcs;
            for (int a : arcs) uses.push_back({a, false});
          } else {
            for (auto r = it->second.rbegin(); r != it->second.rend(); ++r) uses.push_back({*r, true});
          }
        }
      }
      face.loops.push_back(std::move(uses));
    }
    out.faces.push_back(std::move(face));
  }
  out.validate();
  return out;
}

namespace {

// Incremental cost evaluation for the pattern search.
class SearchState {
 public:
  explicit SearchState(ArcPartition p) : part_(std::move(p)), geo_(all_geometry(part_)) {
    incident_.resize(part_.nodes.size());
    for (std::size_t a = 0; a < part_.arcs.size(); ++a) {
      const Arc& arc = part_.arcs[a];
      incident_[arc.start].push_back(static_cast<int>(a));
      if (arc.end != arc.start) incident_[arc.end].push_back(static_cast<int>(a));
      incident_[arc.mid].push_back(static_cast<int>(a));
    }
    length_ = 0.0;
    for (const auto& g : geo_) length_ += g.length;
  }

  const ArcPartition& partition() const { return part_; }
  ArcPartition& partition() { return part_; }

  std::vector<double> areas() const {
    std::vector<double> a;
    for (const auto& f : part_.faces) a.push_back(face_area_cached(f, geo_, part_));
    return a;
  }

  double cost(double eps) const { return 2.0 * length_ + penalty_sum(areas()) / eps; }

  // Cost with node v at x; state unchanged afterwards. Infinite if the move
  // breaks an arc or a face.
  double trial(int v, const Vec3& x, double eps) {
    const Vec3 old = part_.nodes[v];
    saved_.clear();
    for (int a : incident_[v]) saved_.push_back(geo_[a]);
    const double saved_length = length_;
    double c = std::numeric_limits<double>::infinity();
    try {
      set(v, x);
      c = cost(eps);
    } catch (const ArcError&) {
    }
    part_.nodes[v] = old;
    for (std::size_t i = 0; i < incident_[v].size(); ++i) geo_[incident_[v][i]] = saved_[i];
    length_ = saved_length;
    return c;
  }

  void set(int v, const Vec3& x) {
    part_.nodes[v] = x;
    for (int a : incident_[v]) {
      const Arc& arc = part_.arcs[a];
      length_ -= geo_[a].length;
      geo_[a] = arc_geometry(part_.nodes[arc.start], part_.nodes[arc.mid], part_.nodes[arc.end]);
      length_ += geo_[a].length;
    }
  }

  void recentre() {
    recentre_midpoints(part_);
    geo_ = all_geometry(part_);
    length_ = 0.0;
    for (const auto& g : geo_) length_ += g.length;
  }

  Vec3 midpoint_normal(int v) const {
    const Arc& arc = part_.arcs[incident_[v].front()];
    return (part_.nodes[arc.end] - part_.nodes[arc.start]).cross(part_.nodes[v]).normalized();
  }

 private:
  ArcPartition part_;
  std::vector<ArcGeometry> geo_;
  std::vector<std::vector<int>> incident_;
  std::vector<ArcGeometry> saved_;
  double length_ = 0.0;
};

}  // namespace

PatternSearchResult pattern_search(const ArcPartition& start, const PatternSearchOptions& opts, bool record_trace) {
  start.validate();
  if (opts.directions < 2) throw std::invalid_argument("pattern search needs at least two directions");
  SearchState st(start);
  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);

  PatternSearchResult res;
  double eps = opts.initial_penalty_eps;
  const int nodes = static_cast<int>(start.nodes.size());
  for (;;) {
    ++res.rounds;
    if (record_trace) res.cost_trace.emplace_back();
    double current = st.cost(eps);
    if (record_trace) res.cost_trace.back().push_back(current);
    double step = opts.initial_step;
    for (int sweep = 0; sweep < opts.max_sweeps && step >= opts.min_step; ++sweep) {
      ++res.sweeps;
      bool improved = false;
      for (int v = 0; v < nodes; ++v) {
        const Vec3 x = st.partition().nodes[v];
        Vec3 best_x = x;
        double best = current;
        auto consider = [&](const Vec3& dir) {
          const Vec3 y = (x + step * dir).normalized();
          const double c = st.trial(v, y, eps);
          if (c < best) {
            best = c;
            best_x = y;
          }
        };
        if (st.partition().kinds[v] == NodeKind::Midpoint) {
          const Vec3 n = st.midpoint_normal(v);
          consider(n);
          consider(-n);
        } else {
          const auto [e1, e2] = tangent_basis(x);
          const double a0 = angle(rng);
          for (int k = 0; k < opts.directions; ++k) {
            const double a = a0 + 2.0 * kPi * k / opts.directions;
            consider(std::cos(a) * e1 + std::sin(a) * e2);
          }
        }
        if (best < current) {
          st.set(v, best_x);
          current = best;
          improved = true;
          if (record_trace) res.cost_trace.back().push_back(current);
        }
      }
      if (!improved) step *= 0.5;
      // Recentring keeps midpoint moves perpendicular to a balanced arc.
      st.recentre();
      current = st.cost(eps);
    }
    const double diff = max_area_difference(st.areas());
    res.max_area_difference = diff;
    res.penalty_eps = eps;
    res.cost = current;
    if (diff < opts.area_tolerance) {
      res.reached_area_tolerance = true;
      break;
    }
    if (eps * 0.1 < opts.min_penalty_eps) break;
    eps *= 0.1;
  }
  res.partition = st.partition();
  res.single_count_length = single_count_length(res.partition);
  return res;
}

void write_arcs(const ArcPartition& p, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << std::setprecision(17);
  out << "ARCS 1\nnodes " << p.nodes.size() << '\n';
  for (std::size_t i = 0; i < p.nodes.size(); ++i) {
    const char tag = p.kinds[i] == NodeKind::Triple ? 'T' : (p.kinds[i] == NodeKind::Auxiliary ? 'A' : 'M');
    out << tag << ' ' << p.nodes[i].x() << ' ' << p.nodes[i].y() << ' ' << p.nodes[i].z() << '\n';
  }
  out << "arcs " << p.arcs.size() << '\n';
  for (const auto& a : p.arcs) out << a.start << ' ' << a.mid << ' ' << a.end << '\n';
  out << "faces " << p.faces.size() << '\n';
  for (const auto& f : p.faces) {
    out << "face " << f.phase << ' ' << f.euler << ' ' << f.loops.size() << '\n';
    for (const auto& loop : f.loops) {
      out << "loop " << loop.size();
      for (const auto& u : loop) out << ' ' << u.arc << (u.reversed ? "r" : "");
      out << '\n';
    }
  }
}

ArcPartition read_arcs(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  auto expect = [&](const char* word) {
    std::string tok;
    if (!(in >> tok) || tok != word) throw std::runtime_error(path + ": expected '" + word + "', found '" + tok + "'");
  };
  ArcPartition p;
  int version = 0;
  std::size_t count = 0;
  expect("ARCS");
  in >> version;
  expect("nodes");
  in >> count;
  for (std::size_t i = 0; i < count; ++i) {
    char tag = 0;
    double x = 0, y = 0, z = 0;
    in >> tag >> x >> y >> z;
    p.nodes.emplace_back(x, y, z);
    if (tag == 'T') p.kinds.push_back(NodeKind::Triple);
    else if (tag == 'A') p.kinds.push_back(NodeKind::Auxiliary);
    else if (tag == 'M') p.kinds.push_back(NodeKind::Midpoint);
    else throw std::runtime_error(path + ": unknown node tag");
  }
  expect("arcs");
  in >> count;
  p.arcs.resize(count);
  for (auto& a : p.arcs) in >> a.start >> a.mid >> a.end;
  expect("faces");
  in >> count;
  p.faces.resize(count);
  for (auto& f : p.faces) {
    std::size_t loops = 0;
    expect("face");
    in >> f.phase >> f.euler >> loops;
    f.loops.resize(loops);
    for (auto& loop : f.loops) {
      expect("loop");
      in >> count;
      for (std::size_t k = 0; k < count; ++k) {
        std::string tok;
        in >> tok;
        const bool rev = !tok.empty() && tok.back() == 'r';
        if (rev) tok.pop_back();
        loop.push_back({std::stoi(tok), rev});
      }
    }
  }
  if (!in) throw std::runtime_error(path + ": truncated arc file");
  return p;
}

void write_arc_report(const ArcPartition& p, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << std::setprecision(12);
  const auto geo = all_geometry(p);
  const auto areas = face_areas(p);
  const double single = single_count_length(p);
  out << "single_count_length " << single << '\n';
  out << "double_count_length " << 2.0 * single << '\n';
  out << "max_area_difference " << max_area_difference(areas) << '\n';
  out << "cells " << p.faces.size() << '\n';
  for (std::size_t i = 0; i < p.faces.size(); ++i) {
    double per = 0.0;
    for (const auto& loop : p.faces[i].loops)
      for (const auto& u : loop) per += geo[u.arc].length;
    out << "cell " << p.faces[i].phase << " area " << areas[i] << " perimeter " << per << '\n';
  }
  const auto angles = triple_point_angles(p);
  out << "triple_points " << angles.size() << '\n';
  for (const auto& a : angles) out << "angles " << a[0] << ' ' << a[1] << ' ' << a[2] << '\n';
}

void write_arcs_obj(const ArcPartition& p, const std::string& path, int samples) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << std::setprecision(17);
  int next = 1;
  for (const auto& a : p.arcs) {
    const ArcGeometry g = arc_geometry(p.nodes[a.start], p.nodes[a.mid], p.nodes[a.end]);
    for (int s = 0; s <= samples; ++s) {
      const Vec3 x = arc_point(g, p.nodes[a.start], static_cast<double>(s) / samples);
      out << "v " << x.x() << ' ' << x.y() << ' ' << x.z() << '\n';
    }
    out << 'l';
    for (int s = 0; s <= samples; ++s) out << ' ' << next + s;
    out << '\n';
    next += samples + 1;
  }
}

}  // namespace geopart
