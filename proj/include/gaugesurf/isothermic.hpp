#pragma once

#include <algorithm>
#include <array>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "core.hpp"
#include "geomcore.hpp"
#include "grid.hpp"

namespace gaugesurf {

// (u ^ v) w = (u, w) v - (v, w) u on R^{4,1}.
inline Mat5 wedge(const Vec5& u, const Vec5& v) {
  const Mat5 j = metric<double, 5>();
  return v * (j * u).transpose() - u * (j * v).transpose();
}

// exp of an element with X^3 = 0, which holds for f ^ f-perp.
inline Mat5 exp_nilpotent(const Mat5& x) { return Mat5::Identity() + x + 0.5 * x * x; }

// A map into the light cone sampled on a (x, y) grid, meant to be in
// conformal curvature-line coordinates. Finite points keep their affine
// lift (l5 - l4 = 1); points at infinity keep a unit representative.
struct CurvatureLinePatch {
  Grid2 grid;
  std::vector<Vec5> lift;
  std::vector<bool> finite;

  static CurvatureLinePatch from_points(const VecField& f) {
    CurvatureLinePatch p;
    p.grid = f.grid;
    p.lift.resize(f.values.size());
    p.finite.assign(f.values.size(), true);
    for (std::size_t v = 0; v < f.values.size(); ++v) p.lift[v] = lift_rep(f[v]);
    return p;
  }

  static CurvatureLinePatch from_lifts(const Grid2& g, std::vector<Vec5> lifts) {
    CurvatureLinePatch p;
    p.grid = g;
    p.finite.assign(lifts.size(), false);
    for (std::size_t v = 0; v < lifts.size(); ++v) {
      if (auto a = affine_rep(lifts[v], 1e-9)) {
        lifts[v] = *a;
        p.finite[v] = true;
      } else {
        lifts[v] /= lifts[v].norm();
      }
    }
    p.lift = std::move(lifts);
    return p;
  }

  VecField points() const {
    VecField f(grid, Vec3::Zero());
    for (std::size_t v = 0; v < lift.size(); ++v)
      if (finite[v]) f[v] = lift[v].head<3>();
    return f;
  }
  bool all_finite() const { return std::all_of(finite.begin(), finite.end(), [](bool b) { return b; }); }
};

// Example surfaces, all in conformal curvature-line coordinates.
inline CurvatureLinePatch make_cylinder(const Grid2& g, double radius = 1.0) {
  return CurvatureLinePatch::from_points(sample<Vec3>(g, [radius](double x, double y) {
    return Vec3(radius * std::cos(x / radius), radius * std::sin(x / radius), y);
  }));
}

inline CurvatureLinePatch make_catenoid(const Grid2& g, double scale = 1.0) {
  return CurvatureLinePatch::from_points(sample<Vec3>(g, [scale](double x, double y) {
    return Vec3(scale * std::cosh(x) * std::cos(y), scale * std::cosh(x) * std::sin(y), scale * x);
  }));
}

// Unit sphere in Mercator coordinates; every conformal chart is curvature-line.
inline CurvatureLinePatch make_sphere(const Grid2& g) {
  return CurvatureLinePatch::from_points(sample<Vec3>(g, [](double x, double y) {
    const double s = 1.0 / std::cosh(x);
    return Vec3(s * std::cos(y), s * std::sin(y), std::tanh(x));
  }));
}

// A meridian curve s -> (r(s), z(s)) with r > 0.
struct Profile {
  std::function<double(double)> r, z;
  double s0 = 0.0;
};

inline Profile torus_profile(double big, double small) {
  if (!(big > small && small > 0.0)) throw ParameterError("torus profile: need R > r > 0");
  return {[=](double s) { return big + small * std::cos(s); }, [=](double s) { return small * std::sin(s); }, 0.0};
}

// Surface of revolution reparametrised so the profile runs at unit
// hyperbolic speed: f(x, y) = (r cos y, r sin y, z) at s(x).
inline CurvatureLinePatch make_revolution(const Grid2& g, const Profile& prof) {
  auto speed = [&](double s) {
    const double d = 1e-5;
    const double dr = (prof.r(s + d) - prof.r(s - d)) / (2 * d);
    const double dz = (prof.z(s + d) - prof.z(s - d)) / (2 * d);
    const double r = prof.r(s);
    if (!(r > 0.0)) throw GeometryError("revolution: profile leaves the half-plane r > 0");
    return std::sqrt(dr * dr + dz * dz) / r;
  };
  // dx/ds = speed(s): integrate ds/dx = 1/speed with classical RK4
  auto rhs = [&](double s) { return 1.0 / speed(s); };
  const int sub = 8;
  std::vector<double> s_of_x(g.n[0]);
  double s = prof.s0, x = 0.0;
  const double target0 = g.origin[0];
  const double hx = (target0 >= 0 ? 1.0 : -1.0) * g.step[0] / sub;
  while (std::abs(x - target0) > 1e-14) {
    const double h = std::abs(target0 - x) < std::abs(hx) ? target0 - x : hx;
    const double k1 = rhs(s), k2 = rhs(s + 0.5 * h * k1), k3 = rhs(s + 0.5 * h * k2), k4 = rhs(s + h * k3);
    s += h * (k1 + 2 * k2 + 2 * k3 + k4) / 6.0;
    x += h;
  }
  const double h = g.step[0] / sub;
  for (int i = 0; i < g.n[0]; ++i) {
    s_of_x[i] = s;
    for (int k = 0; k < sub; ++k) {
      const double k1 = rhs(s), k2 = rhs(s + 0.5 * h * k1), k3 = rhs(s + 0.5 * h * k2), k4 = rhs(s + h * k3);
      s += h * (k1 + 2 * k2 + 2 * k3 + k4) / 6.0;
    }
  }
  VecField f(g);
  for (int j = 0; j < g.n[1]; ++j)
    for (int i = 0; i < g.n[0]; ++i) {
      const double si = s_of_x[i], y = g.coord(1, j), r = prof.r(si);
      f(i, j) = Vec3(r * std::cos(y), r * std::sin(y), prof.z(si));
    }
  return CurvatureLinePatch::from_points(f);
}

// Graph z = x^2 + 2 y^3: not in curvature-line coordinates.
inline CurvatureLinePatch make_graph_control(const Grid2& g) {
  return CurvatureLinePatch::from_points(
      sample<Vec3>(g, [](double x, double y) { return Vec3(x, y, x * x + 2 * y * y * y); }));
}

// Saddle z = xy in its asymptotic coordinates. Unlike the graph above, its
// edge increments do not separate in x and y.
inline CurvatureLinePatch make_saddle_control(const Grid2& g) {
  return CurvatureLinePatch::from_points(sample<Vec3>(g, [](double x, double y) { return Vec3(x, y, x * y); }));
}

// Conformality, orthogonality and curvature-line residuals by finite
// differences over interior finite vertices.
struct PatchInvariants {
  double conformality = 0.0;    // max |E/G - 1|
  double orthogonality = 0.0;   // max |F| / sqrt(EG)
  double curvature_line = 0.0;  // max |M| / (sqrt(EG) max|kappa|)
  double max() const { return std::max({conformality, orthogonality, curvature_line}); }
};

inline PatchInvariants patch_invariants(const VecField& f, const std::vector<bool>& finite) {
  const Grid2& g = f.grid;
  const VecField fx = fd_field(f, 0), fy = fd_field(f, 1);
  PatchInvariants r;
  for (int j = 0; j < g.n[1]; ++j)
    for (int i = 0; i < g.n[0]; ++i) {
      if (!fd_interior(g, i, j)) continue;
      bool ok = true;
      for (int di = -2; di <= 2 && ok; ++di)
        for (int dj = -2; dj <= 2 && ok; ++dj) ok = finite[g.index(i + di, j + dj)];
      if (!ok) continue;
      const std::size_t v = g.index(i, j);
      const double e = fx[v].squaredNorm(), gg = fy[v].squaredNorm(), fm = fx[v].dot(fy[v]);
      const Vec3 n = fx[v].cross(fy[v]).normalized();
      const double l = fd_second(f, 0, i, j).dot(n), nn = fd_second(f, 1, i, j).dot(n);
      const double m = fd_first(fy, 0, i, j).dot(n);
      r.conformality = std::max(r.conformality, std::abs(e / gg - 1.0));
      r.orthogonality = std::max(r.orthogonality, std::abs(fm) / std::sqrt(e * gg));
      const double kmax = std::max(std::abs(l / e), std::abs(nn / gg));
      const double denom = std::sqrt(e * gg) * std::max(kmax, 1e-9);
      r.curvature_line = std::max(r.curvature_line, std::abs(m) / denom);
    }
  return r;
}

inline PatchInvariants patch_invariants(const CurvatureLinePatch& p) { return patch_invariants(p.points(), p.finite); }

// Edge samples of the retraction form eta = e^{-2u} (f ^ f_x dx - f ^ f_y dy),
// per unit parameter length, at edge midpoints.
struct RetractionForm {
  Grid2 grid;
  std::array<std::vector<Mat5>, 2> edge;

  Mat5 integral(int axis, std::size_t e) const { return grid.step[axis] * edge[axis][e]; }
};

inline RetractionForm build_eta(const CurvatureLinePatch& p) {
  const Grid2& g = p.grid;
  for (std::size_t v = 0; v < p.finite.size(); ++v)
    if (!p.finite[v]) throw DegeneracyError("build_eta: vertex at infinity", v);
  RetractionForm eta{g, {}};
  for (int axis = 0; axis < 2; ++axis) {
    eta.edge[axis].resize(g.edge_count(axis));
    const double h = g.step[axis], sign = axis == 0 ? 1.0 : -1.0;
    for (int j = 0; j < g.n[1] - (axis == 1); ++j)
      for (int i = 0; i < g.n[0] - (axis == 0); ++i) {
        const std::size_t a = g.index(i, j), b = axis == 0 ? g.index(i + 1, j) : g.index(i, j + 1);
        const Vec3 fa = p.lift[a].head<3>(), fb = p.lift[b].head<3>();
        const double d2 = (fb - fa).squaredNorm();
        if (d2 < 1e-24) throw DegeneracyError("build_eta: conformal factor vanishes", a);
        const double e2u = d2 / (h * h);
        eta.edge[axis][g.edge(axis, i, j)] = (sign / e2u) * wedge(lift_rep(0.5 * (fa + fb)), (p.lift[b] - p.lift[a]) / h);
      }
  }
  return eta;
}

struct FlatnessReport {
  double max_defect = 0.0;
  double density = 0.0;
  std::size_t worst_plaquette = 0;
};

// Circulation of eta around each plaquette per unit area.
inline FlatnessReport eta_closedness(const RetractionForm& eta) {
  const Grid2& g = eta.grid;
  FlatnessReport r;
  for (int j = 0; j + 1 < g.n[1]; ++j)
    for (int i = 0; i + 1 < g.n[0]; ++i) {
      const Mat5 c = eta.integral(0, g.edge(0, i, j)) + eta.integral(1, g.edge(1, i + 1, j)) -
                     eta.integral(0, g.edge(0, i, j + 1)) - eta.integral(1, g.edge(1, i, j));
      const double d = c.norm();
      if (d > r.max_defect) {
        r.max_defect = d;
        r.worst_plaquette = g.index(i, j);
      }
    }
  r.density = r.max_defect / g.plaquette_area();
  return r;
}

// Transport of d + t eta along an edge (tail to head).
inline Mat5 pencil_transport(const RetractionForm& eta, int axis, std::size_t e, double t) {
  return exp_nilpotent(-t * eta.integral(axis, e));
}

inline FlatnessReport pencil_flatness(const RetractionForm& eta, double t) {
  const Grid2& g = eta.grid;
  FlatnessReport r;
  for (int j = 0; j + 1 < g.n[1]; ++j)
    for (int i = 0; i + 1 < g.n[0]; ++i) {
      const Mat5 bottom = pencil_transport(eta, 0, g.edge(0, i, j), t);
      const Mat5 right = pencil_transport(eta, 1, g.edge(1, i + 1, j), t);
      const Mat5 top_inv = pencil_transport(eta, 0, g.edge(0, i, j + 1), -t);
      const Mat5 left_inv = pencil_transport(eta, 1, g.edge(1, i, j), -t);
      const double d = (left_inv * top_inv * right * bottom - Mat5::Identity()).norm();
      if (d > r.max_defect) {
        r.max_defect = d;
        r.worst_plaquette = g.index(i, j);
      }
    }
  r.density = r.max_defect / g.plaquette_area();
  return r;
}

// Parallel section of d + t eta along the spanning tree.
inline std::vector<Vec5> parallel_section(const RetractionForm& eta, const Vec5& seed, double t) {
  std::vector<Vec5> y(eta.grid.size());
  y[0] = seed;
  for_each_tree_step(eta.grid, SpanningOrder::RowThenColumns,
                     [&](const TreeStep& s) { y[s.to] = pencil_transport(eta, s.axis, s.edge, t) * y[s.from]; });
  return y;
}

struct DarbouxResult {
  CurvatureLinePatch patch;
  std::vector<std::size_t> singular;  // vertices where the transform meets f
  double parallel_defect = 0.0;       // plaquette holonomy acting on the line, per unit area
  double tangency = 0.0;              // distance of d f-hat from the enveloped sphere
};

// Distance of the first jet of f-hat from span(f, f_x, f_y, f-hat).
inline double sphere_congruence_residual(const CurvatureLinePatch& f, const CurvatureLinePatch& fh) {
  const Grid2& g = f.grid;
  Field<Vec5> a(g), b(g);
  for (std::size_t v = 0; v < g.size(); ++v) {
    a[v] = f.lift[v];
    b[v] = fh.lift[v];
  }
  double worst = 0.0;
  for (int j = 0; j < g.n[1]; ++j)
    for (int i = 0; i < g.n[0]; ++i) {
      if (!fd_interior(g, i, j)) continue;
      bool ok = true;
      for (int d = -2; d <= 2 && ok; ++d) ok = fh.finite[g.index(i + d, j)] && fh.finite[g.index(i, j + d)];
      if (!ok) continue;
      Eigen::Matrix<double, 5, 4> s;
      s << a(i, j), fd_first(a, 0, i, j), fd_first(a, 1, i, j), b(i, j);
      const Eigen::HouseholderQR<Eigen::Matrix<double, 5, 4>> qr(s);
      const Eigen::Matrix<double, 5, 4> q = qr.householderQ() * Eigen::Matrix<double, 5, 4>::Identity();
      for (int axis = 0; axis < 2; ++axis) {
        const Vec5 d = fd_first(b, axis, i, j);
        const double n = d.norm();
        if (n > 0) worst = std::max(worst, (d - q * (q.transpose() * d)).norm() / n);
      }
    }
  return worst;
}

inline DarbouxResult darboux(const CurvatureLinePatch& f, const RetractionForm& eta, double a, const Vec5& y0) {
  if (a == 0.0) throw ParameterError("darboux: parameter must be nonzero");
  if (std::abs(inner(y0, y0)) > 1e-10 * y0.squaredNorm()) throw ParameterError("darboux: initial point is not null");
  if (projective_distance<double, 5>(y0, f.lift[0]) < 1e-8)
    throw ParameterError("darboux: initial point lies on f at the base vertex");
  std::vector<Vec5> y = parallel_section(eta, y0, a);
  DarbouxResult r;
  for (std::size_t v = 0; v < y.size(); ++v)
    if (projective_distance<double, 5>(y[v], f.lift[v]) < 1e-8) r.singular.push_back(v);
  // parallelism of the line around each plaquette
  const Grid2& g = f.grid;
  for (int j = 0; j + 1 < g.n[1]; ++j)
    for (int i = 0; i + 1 < g.n[0]; ++i) {
      const Vec5 around = pencil_transport(eta, 1, g.edge(1, i, j), -a) * pencil_transport(eta, 0, g.edge(0, i, j + 1), -a) *
                          pencil_transport(eta, 1, g.edge(1, i + 1, j), a) * pencil_transport(eta, 0, g.edge(0, i, j), a) *
                          y[g.index(i, j)];
      r.parallel_defect = std::max(r.parallel_defect, projective_distance<double, 5>(around, y[g.index(i, j)]));
    }
  r.parallel_defect /= g.plaquette_area();
  r.patch = CurvatureLinePatch::from_lifts(g, std::move(y));
  for (std::size_t v : r.singular) r.patch.finite[v] = false;
  r.tangency = sphere_congruence_residual(f, r.patch);
  return r;
}

struct TTransformResult {
  CurvatureLinePatch patch;
  std::vector<Mat5> gauge;
  RetractionForm eta;
};

// Gauge T_s with T_s(q) = T_s(p) exp(s eta) along the spanning tree; f_s = T_s f.
inline TTransformResult t_transform(const CurvatureLinePatch& f, const RetractionForm& eta, double s) {
  const Grid2& g = f.grid;
  std::vector<Mat5> t(g.size());
  t[0] = Mat5::Identity();
  for_each_tree_step(g, SpanningOrder::RowThenColumns,
                     [&](const TreeStep& st) { t[st.to] = t[st.from] * exp_nilpotent(s * eta.integral(st.axis, st.edge)); });
  RetractionForm es{g, {}};
  for (int axis = 0; axis < 2; ++axis) {
    es.edge[axis].resize(eta.edge[axis].size());
    for (int j = 0; j < g.n[1] - (axis == 1); ++j)
      for (int i = 0; i < g.n[0] - (axis == 0); ++i) {
        const std::size_t e = g.edge(axis, i, j), p = g.index(i, j);
        es.edge[axis][e] = t[p] * eta.edge[axis][e] * orth_inverse(t[p]);
      }
  }
  std::vector<Vec5> lifts(g.size());
  for (std::size_t v = 0; v < g.size(); ++v) lifts[v] = t[v] * f.lift[v];
  return {CurvatureLinePatch::from_lifts(g, std::move(lifts)), std::move(t), std::move(es)};
}

struct ChristoffelResult {
  VecField dual;
  double path_defect = 0.0;  // plaquette circulation of the edge increments per unit area
};

// Edge-wise dual: increments h^2 df/|df|^2 on x-edges and the negative on y-edges.
inline ChristoffelResult christoffel_dual(const CurvatureLinePatch& p, double max_defect = 1e-1) {
  if (!p.all_finite()) throw ContractError("christoffel: patch has points at infinity");
  const Grid2& g = p.grid;
  const VecField f = p.points();
  auto inc = [&](int axis, std::size_t a, std::size_t b) -> Vec3 {
    const Vec3 d = f[b] - f[a];
    const double d2 = d.squaredNorm();
    if (d2 < 1e-24) throw DegeneracyError("christoffel: conformal factor vanishes", a);
    const double h = g.step[axis];
    return (axis == 0 ? 1.0 : -1.0) * (h * h / d2) * d;
  };
  ChristoffelResult r{VecField(g, Vec3::Zero()), 0.0};
  for_each_tree_step(g, SpanningOrder::RowThenColumns,
                     [&](const TreeStep& s) { r.dual[s.to] = r.dual[s.from] + inc(s.axis, s.from, s.to); });
  std::size_t worst = 0;
  for (int j = 0; j + 1 < g.n[1]; ++j)
    for (int i = 0; i + 1 < g.n[0]; ++i) {
      const Vec3 c = inc(0, g.index(i, j), g.index(i + 1, j)) + inc(1, g.index(i + 1, j), g.index(i + 1, j + 1)) -
                     inc(0, g.index(i, j + 1), g.index(i + 1, j + 1)) - inc(1, g.index(i, j), g.index(i, j + 1));
      const double d = c.norm() / g.plaquette_area();
      if (d > r.path_defect) {
        r.path_defect = d;
        worst = g.index(i, j);
      }
    }
  if (r.path_defect > max_defect) throw NotIsothermicError("christoffel: edge increments are not closed at index " + std::to_string(worst));
  return r;
}

// Checks on a dual pair: parallel tangent planes and orientation reversal.
struct DualityReport {
  double normal_angle = 0.0;  // max angle between the tangent planes
  double min_orientation = 0.0;  // min det(df^{-1} df^c) sign-normalised; negative means reversing
  double max_orientation = 0.0;
};

inline DualityReport duality_report(const VecField& f, const VecField& fc) {
  const Grid2& g = f.grid;
  const VecField fx = fd_field(f, 0), fy = fd_field(f, 1), cx = fd_field(fc, 0), cy = fd_field(fc, 1);
  DualityReport r{0.0, 1e300, -1e300};
  for (int j = 0; j < g.n[1]; ++j)
    for (int i = 0; i < g.n[0]; ++i) {
      if (!fd_interior(g, i, j)) continue;
      const std::size_t v = g.index(i, j);
      const Vec3 n = fx[v].cross(fy[v]), nc = cx[v].cross(cy[v]);
      r.normal_angle = std::max(r.normal_angle, nc.cross(n).norm() / (n.norm() * nc.norm()));
      const double o = n.dot(nc) / (n.norm() * nc.norm());
      r.min_orientation = std::min(r.min_orientation, o);
      r.max_orientation = std::max(r.max_orientation, o);
    }
  return r;
}

// Least-squares fit a = s b + c over the vertices; returns (s, max residual).
inline std::pair<double, double> fit_homothety(const VecField& a, const VecField& b) {
  const std::size_t n = a.values.size();
  Vec3 ma = Vec3::Zero(), mb = Vec3::Zero();
  for (std::size_t v = 0; v < n; ++v) {
    ma += a[v];
    mb += b[v];
  }
  ma /= double(n);
  mb /= double(n);
  double num = 0.0, den = 0.0;
  for (std::size_t v = 0; v < n; ++v) {
    num += (a[v] - ma).dot(b[v] - mb);
    den += (b[v] - mb).squaredNorm();
  }
  const double s = num / den;
  double res = 0.0;
  for (std::size_t v = 0; v < n; ++v) res = std::max(res, (a[v] - ma - s * (b[v] - mb)).norm());
  return {s, res};
}

// Unit normal and mean curvature of a patch from finite differences.
inline std::pair<VecField, ScalarField> normal_and_mean_curvature(const VecField& f) {
  const Grid2& g = f.grid;
  const VecField fx = fd_field(f, 0), fy = fd_field(f, 1);
  VecField n(g);
  ScalarField h(g, 0.0);
  for (int j = 0; j < g.n[1]; ++j)
    for (int i = 0; i < g.n[0]; ++i) {
      const std::size_t v = g.index(i, j);
      n[v] = fx[v].cross(fy[v]).normalized();
      const double e = fx[v].squaredNorm(), fm = fx[v].dot(fy[v]), gg = fy[v].squaredNorm();
      const double l = fd_second(f, 0, i, j).dot(n[v]), m = fd_first(fy, 0, i, j).dot(n[v]),
                   nn = fd_second(f, 1, i, j).dot(n[v]);
      h[v] = (e * nn - 2 * fm * m + gg * l) / (2 * (e * gg - fm * fm));
    }
  return {n, h};
}

// Pointwise Bianchi quadrilateral f, f_a, f_b, f_ab with
// f_ab = Gamma^{f_b}_{f_a}(a/b) f.
struct IsoBianchiReport {
  std::vector<Vec5> fab;
  double cross_ratio_error = 0.0;  // |(f_b, f_a; f, f_ab) - a/b|
  double closure = 0.0;            // (f_a)_b vs (f_b)_a, projective distance
  double matrix_identity = 0.0;    // Gamma-product identity at the sampled t
  bool concircular = true;
};

inline IsoBianchiReport bianchi_quad(const std::vector<Vec5>& f, const std::vector<Vec5>& fa, const std::vector<Vec5>& fb,
                                     double a, double b, std::span<const double> t_samples) {
  if (std::abs(a - b) < 1e-12 || a == 0.0 || b == 0.0) throw ParameterError("bianchi: need distinct nonzero parameters");
  IsoBianchiReport r;
  r.fab.resize(f.size());
  for (std::size_t v = 0; v < f.size(); ++v) {
    const Vec5 ab = gamma_matrix<double, 5>(fb[v], fa[v], a / b) * f[v];
    const Vec5 ab1 = gamma_matrix<double, 5>(fa[v], f[v], 1.0 - b / a) * fb[v];
    const Vec5 ab2 = gamma_matrix<double, 5>(fb[v], f[v], 1.0 - a / b) * fa[v];
    r.fab[v] = ab;
    r.closure = std::max({r.closure, projective_distance<double, 5>(ab1, ab2), projective_distance<double, 5>(ab, ab1)});
    const Point pf(f[v]), pa(fa[v]), pb(fb[v]), pab(ab);
    if (!concircular({pf, pa, pb, pab})) r.concircular = false;
    r.cross_ratio_error = std::max(r.cross_ratio_error, std::abs(cross_ratio(pb, pa, pf, pab).value - a / b));
    for (double t : t_samples) {
      const Mat5 lhs = gamma_matrix<double, 5>(ab, fa[v], 1 - t / b) * gamma_matrix<double, 5>(fa[v], f[v], 1 - t / a);
      const Mat5 mid = gamma_matrix<double, 5>(fb[v], fa[v], (1 - t / b) / (1 - t / a));
      const Mat5 rhs = gamma_matrix<double, 5>(ab, fb[v], 1 - t / a) * gamma_matrix<double, 5>(fb[v], f[v], 1 - t / b);
      const double scale = 1.0 + mid.norm();
      r.matrix_identity = std::max({r.matrix_identity, (lhs - mid).norm() / scale, (rhs - mid).norm() / scale});
    }
  }
  return r;
}

// Bianchi cube from three Darboux transforms: the three candidates for
// f_abc must agree, and f_a, f_b, f_c, f_abc are concircular with
// cross-ratio (1 - c/b)/(1 - c/a).
struct CubeReport {
  std::vector<Vec5> fabc;
  double closure = 0.0;
  double cross_ratio_error = 0.0;
  bool concircular = true;
};

inline CubeReport bianchi_cube(const std::vector<Vec5>& f, const std::vector<Vec5>& fa, const std::vector<Vec5>& fb,
                               const std::vector<Vec5>& fc, double a, double b, double c) {
  if (a == b || b == c || a == c) throw ParameterError("cube: parameters must be distinct");
  CubeReport r;
  r.fabc.resize(f.size());
  const double expected = (1 - c / b) / (1 - c / a);
  for (std::size_t v = 0; v < f.size(); ++v) {
    const Vec5 fab = gamma_matrix<double, 5>(fb[v], fa[v], a / b) * f[v];
    const Vec5 fac = gamma_matrix<double, 5>(fc[v], fa[v], a / c) * f[v];
    const Vec5 fbc = gamma_matrix<double, 5>(fc[v], fb[v], b / c) * f[v];
    const Vec5 x1 = gamma_matrix<double, 5>(fab, fa[v], 1 - c / b) * fac;
    const Vec5 x2 = gamma_matrix<double, 5>(fab, fb[v], 1 - c / a) * fbc;
    const Vec5 x3 = gamma_matrix<double, 5>(fac, fa[v], 1 - b / c) * fab;
    r.fabc[v] = x1;
    r.closure = std::max({r.closure, projective_distance<double, 5>(x1, x2), projective_distance<double, 5>(x1, x3)});
    const Point pa(fa[v]), pb(fb[v]), pc(fc[v]), px(x1);
    if (!concircular({pa, pb, pc, px})) r.concircular = false;
    r.cross_ratio_error = std::max(r.cross_ratio_error, std::abs(cross_ratio(pb, pa, pc, px).value - expected));
  }
  return r;
}

}  // namespace gaugesurf
