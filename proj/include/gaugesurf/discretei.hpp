#pragma once

#include <algorithm>
#include <array>
#include <random>
#include <vector>

#include "core.hpp"
#include "geomcore.hpp"

namespace gaugesurf {

// A map from a box in Z^3 (extent 1 along unused axes) into the light cone.
struct QuadMap {
  std::array<int, 3> extents{1, 1, 1};
  std::vector<Vec5> points;  // unit representatives, i fastest

  QuadMap() = default;
  explicit QuadMap(std::array<int, 3> ext) : extents(ext), points(size(), Vec5::Zero()) {}

  std::size_t size() const { return static_cast<std::size_t>(extents[0]) * extents[1] * extents[2]; }
  std::size_t index(int i, int j, int k = 0) const {
    return (static_cast<std::size_t>(k) * extents[1] + j) * extents[0] + i;
  }
  std::array<int, 3> coords(std::size_t v) const {
    const int i = static_cast<int>(v % extents[0]);
    const int j = static_cast<int>((v / extents[0]) % extents[1]);
    const int k = static_cast<int>(v / (static_cast<std::size_t>(extents[0]) * extents[1]));
    return {i, j, k};
  }
  std::size_t neighbour(std::size_t v, int axis) const {
    static constexpr std::size_t none = static_cast<std::size_t>(-1);
    auto c = coords(v);
    if (c[axis] + 1 >= extents[axis]) return none;
    ++c[axis];
    return index(c[0], c[1], c[2]);
  }
  Vec5& operator[](std::size_t v) { return points[v]; }
  const Vec5& operator[](std::size_t v) const { return points[v]; }

  void validate() const {
    if (extents[0] < 2 || extents[1] < 2) throw ContractError("quad map: need at least 2x2 vertices");
    if (points.size() != size()) throw ContractError("quad map: point count does not match extents");
    for (std::size_t v = 0; v < points.size(); ++v)
      if (std::abs(inner(points[v], points[v])) > 1e-9 * points[v].squaredNorm())
        throw GeometryError("quad map: point " + std::to_string(v) + " is not null");
  }
};

// Factorising function. Equality on opposite edges of every face means the
// weight of an edge along `axis` depends only on that axis coordinate:
// per_axis[axis][c] belongs to the edges from c to c + 1.
struct EdgeWeights {
  std::array<std::vector<double>, 3> per_axis;

  double operator()(int axis, const std::array<int, 3>& tail) const { return per_axis[axis][tail[axis]]; }

  // Build from explicit per-edge values, indexed like QuadMap vertices by
  // the edge's tail; fails unless opposite edges agree.
  static EdgeWeights from_edges(const std::array<int, 3>& ext, const std::array<std::vector<double>, 3>& edges, double tol = 1e-12) {
    EdgeWeights w;
    for (int axis = 0; axis < 3; ++axis) {
      if (ext[axis] < 2) continue;
      std::array<int, 3> e = ext;
      e[axis] -= 1;
      const std::size_t count = static_cast<std::size_t>(e[0]) * e[1] * e[2];
      if (edges[axis].size() != count) throw DataError("edge weights: wrong number of edges along axis " + std::to_string(axis));
      w.per_axis[axis].assign(e[axis], 0.0);
      std::vector<bool> seen(e[axis], false);
      for (std::size_t idx = 0; idx < count; ++idx) {
        const int i = static_cast<int>(idx % e[0]), j = static_cast<int>((idx / e[0]) % e[1]),
                  k = static_cast<int>(idx / (static_cast<std::size_t>(e[0]) * e[1]));
        const int c = axis == 0 ? i : axis == 1 ? j : k;
        if (!seen[c]) {
          w.per_axis[axis][c] = edges[axis][idx];
          seen[c] = true;
        } else if (std::abs(w.per_axis[axis][c] - edges[axis][idx]) > tol * std::max(1.0, std::abs(edges[axis][idx]))) {
          throw DataError("edge weights: opposite edges differ along axis " + std::to_string(axis));
        }
      }
    }
    return w;
  }

  void validate(const std::array<int, 3>& ext) const {
    for (int axis = 0; axis < 3; ++axis) {
      if (ext[axis] < 2) continue;
      if (per_axis[axis].size() != static_cast<std::size_t>(ext[axis] - 1)) throw ContractError("edge weights: size does not match the map");
      for (double a : per_axis[axis])
        if (a == 0.0 || !std::isfinite(a)) throw DataError("edge weights: factorising function must be finite and nonzero");
    }
  }

  EdgeWeights shifted(double s) const {
    EdgeWeights w = *this;
    for (auto& v : w.per_axis)
      for (double& a : v) a -= s;
    return w;
  }
};

// Seeds. The planar grid is centred on the origin: far from it the unit
// representatives of lifted points lose relative precision.
inline QuadMap planar_grid(int n0, int n1, double p, double q, EdgeWeights* weights = nullptr) {
  QuadMap f({n0, n1, 1});
  const double c0 = 0.5 * (n0 - 1) * p, c1 = 0.5 * (n1 - 1) * q;
  for (int j = 0; j < n1; ++j)
    for (int i = 0; i < n0; ++i) f[f.index(i, j)] = lift(Vec3(i * p - c0, j * q - c1, 0.0)).rep();
  if (weights) {
    weights->per_axis[0].assign(n0 - 1, 1.0 / (p * p));
    weights->per_axis[1].assign(n1 - 1, -1.0 / (q * q));
    weights->per_axis[2].clear();
  }
  return f;
}

// Circular cylinder of radius 1 on a curvature-line lattice.
inline QuadMap cylinder_grid(int n0, int n1, double dtheta, double dz, EdgeWeights* weights = nullptr) {
  QuadMap f({n0, n1, 1});
  for (int j = 0; j < n1; ++j)
    for (int i = 0; i < n0; ++i) f[f.index(i, j)] = lift(Vec3(std::cos(i * dtheta), std::sin(i * dtheta), j * dz)).rep();
  if (weights) {
    const double chord = 2.0 * std::sin(0.5 * dtheta);
    weights->per_axis[0].assign(n0 - 1, 1.0 / (chord * chord));
    weights->per_axis[1].assign(n1 - 1, -1.0 / (dz * dz));
    weights->per_axis[2].clear();
  }
  return f;
}

namespace detail {
inline std::vector<std::pair<int, int>> face_families(const std::array<int, 3>& ext) {
  std::vector<std::pair<int, int>> out;
  for (int a = 0; a < 3; ++a)
    for (int b = a + 1; b < 3; ++b)
      if (ext[a] > 1 && ext[b] > 1) out.emplace_back(a, b);
  return out;
}

// Unit representative pushed back onto the cone; long transports leave the
// null condition to drift at the level of the matrix conditioning.
inline Vec5 renull(Vec5 y) {
  const double sp = y.head<4>().norm();
  if (sp > 0.0) y.head<4>() *= std::abs(y(4)) / sp;
  return y / y.norm();
}
}  // namespace detail

struct FaceDefect {
  std::size_t vertex;  // corner i of the face
  int axis0, axis1;
  double defect;
};

struct IsothermicReport {
  bool isothermic = true;
  double max_defect = 0.0;
  std::vector<FaceDefect> failing;
};

// Per face (i, j, k, l) with j = i + e_a, l = i + e_b: distance of f(k)
// from Gamma^{f(l)}_{f(j)}(a(i,j)/a(i,l)) f(i), the unique point on the
// circle through f(l), f(j), f(i) with the prescribed cross-ratio.
inline IsothermicReport is_isothermic(const QuadMap& f, const EdgeWeights& a, double tol = 1e-9) {
  f.validate();
  a.validate(f.extents);
  IsothermicReport r;
  for (auto [ax, bx] : detail::face_families(f.extents))
    for (std::size_t v = 0; v < f.size(); ++v) {
      const std::size_t j = f.neighbour(v, ax), l = f.neighbour(v, bx);
      if (j == static_cast<std::size_t>(-1) || l == static_cast<std::size_t>(-1)) continue;
      const std::size_t k = f.neighbour(j, bx);
      const auto c = f.coords(v);
      const double want = a(ax, c) / a(bx, c);
      const Vec5 k_star = gamma_matrix<double, 5>(f[l], f[j], want) * f[v];
      const double d = projective_distance<double, 5>(k_star, f[k]);
      r.max_defect = std::max(r.max_defect, d);
      if (d > tol) r.failing.push_back({v, ax, bx, d});
    }
  r.isothermic = r.failing.empty();
  return r;
}

// Gamma^t_{ji} = Gamma^{f(j)}_{f(i)}(1 - t/a(i,j)) on every positive edge.
struct DiscreteConnection {
  std::array<int, 3> extents{1, 1, 1};
  double t = 0.0;
  std::array<std::vector<Mat5>, 3> forward;  // indexed by tail vertex

  Mat5 along(int axis, std::size_t tail) const { return forward[axis][tail]; }
};

inline DiscreteConnection connection(const QuadMap& f, const EdgeWeights& a, double t) {
  f.validate();
  a.validate(f.extents);
  DiscreteConnection c;
  c.extents = f.extents;
  c.t = t;
  for (int axis = 0; axis < 3; ++axis) {
    if (f.extents[axis] < 2) continue;
    c.forward[axis].assign(f.size(), Mat5::Identity());
    for (std::size_t v = 0; v < f.size(); ++v) {
      const std::size_t w = f.neighbour(v, axis);
      if (w == static_cast<std::size_t>(-1)) continue;
      const double av = a(axis, f.coords(v));
      const double s = 1.0 - t / av;
      if (std::abs(s) <= 1e-12) throw PoleError("connection: t equals the factorising function on an edge", v);
      if (std::abs(inner(f[v], f[w])) <= 1e-14) throw SingularPairError("connection: adjacent vertices coincide at " + std::to_string(v));
      c.forward[axis][v] = gamma_matrix<double, 5>(f[w], f[v], s);
    }
  }
  return c;
}

inline QuadMap shape_only(const std::array<int, 3>& ext) {
  QuadMap m;
  m.extents = ext;
  return m;
}

struct FlatnessResult {
  double max_defect = 0.0;
  std::size_t worst_face = 0;
};

inline FlatnessResult flatness(const DiscreteConnection& c) {
  const QuadMap shape = shape_only(c.extents);
  FlatnessResult r;
  for (auto [ax, bx] : detail::face_families(c.extents))
    for (std::size_t v = 0; v < shape.size(); ++v) {
      const std::size_t j = shape.neighbour(v, ax), l = shape.neighbour(v, bx);
      if (j == static_cast<std::size_t>(-1) || l == static_cast<std::size_t>(-1)) continue;
      const Mat5 lhs = c.along(bx, j) * c.along(ax, v);
      const Mat5 rhs = c.along(ax, l) * c.along(bx, v);
      const double d = (lhs - rhs).norm() / std::max(1.0, lhs.norm());
      if (d > r.max_defect) {
        r.max_defect = d;
        r.worst_face = v;
      }
    }
  return r;
}

enum class LatticeOrder { AxisZeroFirst, AxisOneFirst };

// Gauge with T(base) = 1 and T(j) = T(i) Gamma_{ji}^{-1} along a spanning tree.
struct DiscreteGauge {
  std::vector<Mat5> gauge;
  double residual = 0.0;  // max over all edges of |T(j)^{-1} T(i) - Gamma_{ji}|
};

inline DiscreteGauge trivialize(const DiscreteConnection& c, LatticeOrder order = LatticeOrder::AxisZeroFirst,
                                double max_defect = 1e-8) {
  if (const FlatnessResult fr = flatness(c); fr.max_defect > max_defect)
    throw NotFlatError("discrete trivialize: connection is not flat", fr.worst_face);
  const QuadMap shape = shape_only(c.extents);
  DiscreteGauge g;
  g.gauge.assign(shape.size(), Mat5::Identity());
  std::vector<bool> done(shape.size(), false);
  done[0] = true;
  const std::array<int, 3> axes = order == LatticeOrder::AxisZeroFirst ? std::array<int, 3>{0, 1, 2} : std::array<int, 3>{1, 0, 2};
  // sweep: first along axes[0] from the origin, then axes[1], then axes[2]
  for (int stage = 0; stage < 3; ++stage) {
    const int axis = axes[stage];
    if (c.extents[axis] < 2) continue;
    for (std::size_t v = 0; v < shape.size(); ++v) {
      if (!done[v]) continue;
      std::size_t cur = v;
      for (std::size_t nxt = shape.neighbour(cur, axis); nxt != static_cast<std::size_t>(-1) && !done[nxt];
           cur = nxt, nxt = shape.neighbour(cur, axis)) {
        g.gauge[nxt] = g.gauge[cur] * orth_inverse(c.along(axis, cur));
        done[nxt] = true;
      }
    }
  }
  for (int axis = 0; axis < 3; ++axis) {
    if (c.extents[axis] < 2) continue;
    for (std::size_t v = 0; v < shape.size(); ++v) {
      const std::size_t w = shape.neighbour(v, axis);
      if (w == static_cast<std::size_t>(-1)) continue;
      const Mat5 m = orth_inverse(g.gauge[w]) * g.gauge[v];
      g.residual = std::max(g.residual, (m - c.along(axis, v)).norm() / std::max(1.0, m.norm()));
    }
  }
  return g;
}

struct DiscreteDarbouxResult {
  QuadMap fhat;
  std::vector<std::size_t> singular;  // vertices where f-hat meets f
  double cross_ratio_spread = 0.0;    // max |cr - a(i,j)/ahat| / max(1, |a(i,j)/ahat|)
};

inline DiscreteDarbouxResult darboux(const QuadMap& f, const EdgeWeights& a, double ahat, const Vec5& y0) {
  if (ahat == 0.0) throw ParameterError("discrete darboux: parameter must be nonzero");
  if (std::abs(inner(y0, y0)) > 1e-10 * y0.squaredNorm()) throw ParameterError("discrete darboux: seed is not null");
  if (projective_distance<double, 5>(y0, f[0]) < 1e-8) throw ParameterError("discrete darboux: seed lies on f at the base vertex");
  const DiscreteConnection c = connection(f, a, ahat);
  if (const FlatnessResult fr = flatness(c); fr.max_defect > 1e-8)
    throw NotFlatError("discrete darboux: connection is not flat", fr.worst_face);
  // fhat(j) = Gamma_{ji} fhat(i), renormalised per step; the full gauge can
  // grow far beyond double range on long grids while the section does not.
  DiscreteDarbouxResult r;
  r.fhat = QuadMap(f.extents);
  std::vector<bool> done(f.size(), false);
  r.fhat[0] = detail::renull(y0);
  done[0] = true;
  for (int axis = 0; axis < 3; ++axis) {
    if (f.extents[axis] < 2) continue;
    for (std::size_t v = 0; v < f.size(); ++v) {
      if (!done[v]) continue;
      std::size_t cur = v;
      for (std::size_t nxt = f.neighbour(cur, axis); nxt != static_cast<std::size_t>(-1) && !done[nxt];
           cur = nxt, nxt = f.neighbour(cur, axis)) {
        r.fhat[nxt] = detail::renull(c.along(axis, cur) * r.fhat[cur]);
        done[nxt] = true;
      }
    }
  }
  for (std::size_t v = 0; v < f.size(); ++v)
    if (projective_distance<double, 5>(r.fhat[v], f[v]) < 1e-8) r.singular.push_back(v);
  for (int axis = 0; axis < 3; ++axis) {
    if (f.extents[axis] < 2) continue;
    for (std::size_t v = 0; v < f.size(); ++v) {
      const std::size_t w = f.neighbour(v, axis);
      if (w == static_cast<std::size_t>(-1)) continue;
      const double want = a(axis, f.coords(v)) / ahat;
      const double got = cross_ratio(Point(r.fhat[v]), Point(f[w]), Point(f[v]), Point(r.fhat[w])).value;
      r.cross_ratio_spread = std::max(r.cross_ratio_spread, std::abs(got - want) / std::max(1.0, std::abs(want)));
    }
  }
  return r;
}

// Stack of successive Darboux transforms as a map on Z^3 (k = level).
struct TripleSystem {
  QuadMap map;
  EdgeWeights weights;
  double level_defect = 0.0;  // worst face defect over all three face families
};

inline TripleSystem triple_system(const QuadMap& f, const EdgeWeights& a, const std::vector<double>& ahats,
                                  const std::vector<Vec5>& seeds) {
  if (f.extents[2] != 1) throw ContractError("triple system: base map must be two-dimensional");
  if (ahats.empty() || ahats.size() != seeds.size()) throw ContractError("triple system: need one seed per parameter");
  const int levels = static_cast<int>(ahats.size()) + 1;
  TripleSystem ts;
  ts.map = QuadMap({f.extents[0], f.extents[1], levels});
  ts.weights = a;
  ts.weights.per_axis[2] = ahats;
  QuadMap cur = f;
  for (int k = 0; k < levels; ++k) {
    for (int j = 0; j < f.extents[1]; ++j)
      for (int i = 0; i < f.extents[0]; ++i) ts.map[ts.map.index(i, j, k)] = cur[cur.index(i, j)];
    if (k + 1 < levels) cur = darboux(cur, a, ahats[k], seeds[k]).fhat;
  }
  ts.level_defect = is_isothermic(ts.map, ts.weights, 1e300).max_defect;
  return ts;
}

struct DiscreteTTransform {
  QuadMap map;
  EdgeWeights weights;  // a - s
  std::vector<Mat5> gauge;
};

// f_s = T_s f with T_s trivialising Gamma^s; f_s is isothermic with a - s.
inline DiscreteTTransform t_transform(const QuadMap& f, const EdgeWeights& a, double s) {
  const DiscreteGauge g = trivialize(connection(f, a, s));
  DiscreteTTransform r;
  r.map = QuadMap(f.extents);
  for (std::size_t v = 0; v < f.size(); ++v) {
    const Vec5 y = g.gauge[v] * f[v];
    r.map[v] = y / y.norm();
  }
  r.weights = a.shifted(s);
  r.gauge = g.gauge;
  return r;
}

// Random perturbation of every vertex in R^3 by up to `size`, re-lifted.
inline QuadMap perturbed(const QuadMap& f, double size, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-size, size);
  QuadMap g = f;
  for (auto& p : g.points) {
    auto x = project(p);
    if (!x) continue;
    p = lift(Vec3(*x + Vec3(u(rng), u(rng), u(rng)))).rep();
  }
  return g;
}

}  // namespace gaugesurf
