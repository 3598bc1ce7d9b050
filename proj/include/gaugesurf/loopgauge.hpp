#pragma once

#include <algorithm>
#include <array>
#include <vector>

#include "core.hpp"
#include "geomcore.hpp"
#include "grid.hpp"

namespace gaugesurf {

// Rotation vector w with exp(hat(w)) p = q along the great circle.
inline Vec3 rotation_between(const Vec3& p, const Vec3& q) {
  const Vec3 c = p.cross(q);
  const double s = c.norm();
  const double th = std::atan2(s, p.dot(q));
  if (s < 1e-300) return Vec3::Zero();
  return c * (th / s);
}

// A dressing factor r(lambda) = Gamma^L_{conj L}(phi(lambda)) with
// phi(lambda) = ((1 + ia)/(1 - ia)) (lambda - ia)/(lambda + ia), one per
// vertex. `line[v]` is the unit +i eigenvector of hat(axis[v]).
struct DressingFactor {
  double a = 1.0;
  std::vector<CVec3> line;
  std::vector<Vec3> axis;

  static DressingFactor from_lines(double a, std::vector<CVec3> lines) {
    DressingFactor r;
    r.a = a;
    r.axis.resize(lines.size());
    for (std::size_t v = 0; v < lines.size(); ++v) {
      CVec3& l = lines[v];
      l /= l.norm();
      if (projective_distance<Complex, 3>(l, l.conjugate()) < 1e-8)
        throw SingularConfigurationError("dressing: L meets conj(L)", v);
      const CVec3 c = cross<Complex>(l, CVec3(l.conjugate())) / Complex(0, 2);
      const Vec3 t = c.real();
      if (t.norm() < 1e-12) throw SingularConfigurationError("dressing: L is not isotropic", v);
      r.axis[v] = t / t.norm();
    }
    r.line = std::move(lines);
    return r;
  }

  Complex phi(Complex lambda, std::size_t where = 0) const {
    const Complex ia(0, a);
    if (std::abs(lambda + ia) <= 1e-14 * (1.0 + std::abs(lambda)) || std::abs(lambda - ia) <= 1e-14 * (1.0 + std::abs(lambda)))
      throw PoleError("dressing: lambda hits a pole at +-ia", where);
    return ((1.0 + ia) / (1.0 - ia)) * (lambda - ia) / (lambda + ia);
  }

  CMat3 at(std::size_t v, Complex lambda) const {
    return gamma_matrix<Complex, 3>(line[v], line[v].conjugate(), phi(lambda, v));
  }
  CMat3 inverse_at(std::size_t v, Complex lambda) const {
    return gamma_matrix<Complex, 3>(line[v], line[v].conjugate(), 1.0 / phi(lambda, v));
  }
  // r(infinity) = exp(theta hat(axis)), e^{i theta} = (1 + ia)/(1 - ia)
  Mat3 at_infinity(std::size_t v) const {
    const double theta = std::arg(Complex(1, a) / Complex(1, -a));
    return rodrigues(Vec3(theta * axis[v]));
  }
  // vee of d r / d lambda at lambda = 1
  Vec3 derivative_at_one(std::size_t v) const { return (2.0 * a / (1.0 + a * a)) * axis[v]; }
};

// The family d_lambda = (1 - lambda) N+ + (1 - 1/lambda) N- relative to the
// flat connection d, discretised edge-wise from a Gauss map sampled on a
// characteristic grid, optionally dressed by a chain of factors.
class LoopConnection {
 public:
  static LoopConnection split(const VecField& normal) {
    const Grid2& g = normal.grid;
    g.validate();
    for (std::size_t v = 0; v < g.size(); ++v)
      if (std::abs(normal[v].norm() - 1.0) > 1e-8) throw DataError("split_connection: N is not unit at vertex " + std::to_string(v));
    LoopConnection c;
    c.grid_ = g;
    c.normal_ = normal;
    for (int axis = 0; axis < 2; ++axis) {
      c.w_[axis].resize(g.edge_count(axis));
      for (int j = 0; j < g.n[1] - (axis == 1); ++j)
        for (int i = 0; i < g.n[0] - (axis == 0); ++i) {
          const std::size_t p = g.index(i, j), q = axis == 0 ? g.index(i + 1, j) : g.index(i, j + 1);
          c.w_[axis][g.edge(axis, i, j)] = rotation_between(normal[p], normal[q]);
        }
    }
    return c;
  }

  const Grid2& grid() const { return grid_; }
  const VecField& normal() const { return normal_; }
  const std::vector<DressingFactor>& dressings() const { return dressings_; }
  const Vec3& rotation(int axis, std::size_t e) const { return w_[axis][e]; }

  std::pair<std::size_t, std::size_t> endpoints(int axis, std::size_t e) const {
    const std::size_t row = axis == 0 ? grid_.n[0] - 1 : grid_.n[0];
    const int i = static_cast<int>(e % row), j = static_cast<int>(e / row);
    return {grid_.index(i, j), axis == 0 ? grid_.index(i + 1, j) : grid_.index(i, j + 1)};
  }

  // D-transport (lambda = 1) and the midpoint samples of N+(d xi), N-(d eta).
  Mat3 d_transport(int axis, std::size_t e) const { return rodrigues(w_[axis][e]); }
  Mat3 n_plus(std::size_t xi_edge) const { return hat(Vec3(w_[0][xi_edge] / grid_.step[0])); }
  Mat3 n_minus(std::size_t eta_edge) const { return hat(Vec3(w_[1][eta_edge] / grid_.step[1])); }

  CMat3 transport(int axis, std::size_t e, Complex lambda) const {
    const Complex z = axis == 0 ? 1.0 - lambda : 1.0 - 1.0 / lambda;
    CMat3 p = expm(CMat3(z * hat(w_[axis][e]).cast<Complex>()));
    if (dressings_.empty()) return p;
    const auto [from, to] = endpoints(axis, e);
    for (const auto& r : dressings_) p = r.at(to, lambda) * p * r.inverse_at(from, lambda);
    return p;
  }

  // The dressed family r(lambda) d_lambda; its Gauss map is r(infinity) N.
  LoopConnection dressed(const DressingFactor& r) const {
    if (r.line.size() != grid_.size()) throw ContractError("dressing: factor does not match the grid");
    LoopConnection c = *this;
    for (std::size_t v = 0; v < grid_.size(); ++v) c.normal_[v] = r.at_infinity(v) * normal_[v];
    c.dressings_.push_back(r);
    return c;
  }

 private:
  Grid2 grid_;
  VecField normal_;
  std::array<std::vector<Vec3>, 2> w_;
  std::vector<DressingFactor> dressings_;
};

inline LoopConnection split_connection(const VecField& normal) { return LoopConnection::split(normal); }

struct EdgeTransports {
  std::array<std::vector<CMat3>, 2> p;
};

inline EdgeTransports all_transports(const LoopConnection& c, Complex lambda) {
  EdgeTransports t;
  for (int axis = 0; axis < 2; ++axis) {
    const std::size_t m = c.grid().edge_count(axis);
    t.p[axis].resize(m);
    for (std::size_t e = 0; e < m; ++e) t.p[axis][e] = c.transport(axis, e, lambda);
  }
  return t;
}

struct HolonomyReport {
  double max_defect = 0.0;  // max |H - 1| over plaquettes
  double density = 0.0;     // the same divided by the plaquette area
  std::size_t worst_plaquette = 0;
};

inline HolonomyReport holonomy_residual(const LoopConnection& c, Complex lambda) {
  const Grid2& g = c.grid();
  const EdgeTransports t = all_transports(c, lambda);
  HolonomyReport r;
  for (int j = 0; j + 1 < g.n[1]; ++j)
    for (int i = 0; i + 1 < g.n[0]; ++i) {
      const CMat3& bottom = t.p[0][g.edge(0, i, j)];
      const CMat3& right = t.p[1][g.edge(1, i + 1, j)];
      const CMat3& top = t.p[0][g.edge(0, i, j + 1)];
      const CMat3& left = t.p[1][g.edge(1, i, j)];
      const CMat3 h = left.inverse() * top.inverse() * right * bottom;
      const double d = (h - CMat3::Identity()).norm();
      if (d > r.max_defect) {
        r.max_defect = d;
        r.worst_plaquette = g.index(i, j);
      }
    }
  r.density = r.max_defect / g.plaquette_area();
  return r;
}

// Gauge T with T(base) = 1 and T(q) = T(p) P^{-1} along the spanning tree.
struct GaugeField {
  Grid2 grid;
  Complex lambda;
  std::vector<CMat3> gauge;
  // max |T| difference between the two spanning orders
  double path_defect = 0.0;
};

inline std::vector<CMat3> sweep_gauge(const LoopConnection& c, const EdgeTransports& t, SpanningOrder order) {
  std::vector<CMat3> gauge(c.grid().size());
  gauge[0] = CMat3::Identity();
  for_each_tree_step(c.grid(), order, [&](const TreeStep& s) { gauge[s.to] = gauge[s.from] * t.p[s.axis][s.edge].inverse(); });
  return gauge;
}

inline GaugeField trivialize(const LoopConnection& c, Complex lambda, double max_density = 0.05) {
  const HolonomyReport hr = holonomy_residual(c, lambda);
  if (hr.density > max_density) throw NotFlatError("trivialize: connection is not flat", hr.worst_plaquette);
  const EdgeTransports t = all_transports(c, lambda);
  GaugeField out{c.grid(), lambda, sweep_gauge(c, t, SpanningOrder::RowThenColumns), 0.0};
  const auto alt = sweep_gauge(c, t, SpanningOrder::ColumnThenRows);
  for (std::size_t v = 0; v < alt.size(); ++v) out.path_defect = std::max(out.path_defect, (alt[v] - out.gauge[v]).norm());
  return out;
}

// max over tree edges of |T(q) P T(p)^{-1} - 1|: the gauged family is trivial there
inline double gauge_back_residual(const LoopConnection& c, const GaugeField& t) {
  double r = 0.0;
  for_each_tree_step(c.grid(), SpanningOrder::RowThenColumns, [&](const TreeStep& s) {
    const CMat3 m = t.gauge[s.to] * c.transport(s.axis, s.edge, t.lambda) * t.gauge[s.from].inverse();
    r = std::max(r, (m - CMat3::Identity()).norm());
  });
  return r;
}

struct SymResult {
  VecField f;
  double derivative_error = 0.0;  // Richardson estimate of the lambda-derivative error
  double imaginary_part = 0.0;    // max |Im| of the so(3) element, zero for a real family
  double skew_defect = 0.0;
};

// f^mu = mu (d T / d lambda)(mu) T(mu)^{-1}, by central differences in lambda
// with one Richardson step.
inline SymResult sym(const LoopConnection& c, double mu, double delta = 2e-4, double max_error = 1e-5) {
  if (!(std::abs(mu) > 0.0)) throw ParameterError("sym: mu must be nonzero");
  if (!(delta > 1e-10 * std::max(1.0, std::abs(mu)))) throw NumericalDerivativeError("sym: lambda step underflows");
  if (delta >= std::abs(mu)) throw NumericalDerivativeError("sym: lambda step exceeds |mu|");
  const double huge = 1e300;
  auto gauge_at = [&](double lam) { return trivialize(c, Complex(lam, 0.0), huge).gauge; };
  const auto t0 = gauge_at(mu);
  const auto tp1 = gauge_at(mu + delta), tm1 = gauge_at(mu - delta);
  const auto tp2 = gauge_at(mu + 0.5 * delta), tm2 = gauge_at(mu - 0.5 * delta);
  SymResult r;
  r.f = VecField(c.grid());
  for (std::size_t v = 0; v < t0.size(); ++v) {
    const CMat3 d1 = (tp1[v] - tm1[v]) / (2.0 * delta);
    const CMat3 d2 = (tp2[v] - tm2[v]) / delta;
    const CMat3 d = (4.0 * d2 - d1) / 3.0;
    const CMat3 x = mu * d * t0[v].inverse();
    const Mat3 re = x.real();
    r.f[v] = vee(re);
    r.derivative_error = std::max(r.derivative_error, std::abs(mu) * (d2 - d1).norm() / 3.0);
    r.imaginary_part = std::max(r.imaginary_part, x.imag().cwiseAbs().maxCoeff());
    r.skew_defect = std::max(r.skew_defect, (re + re.transpose()).cwiseAbs().maxCoeff());
  }
  if (r.derivative_error > max_error)
    throw NumericalDerivativeError("sym: lambda-derivative fails the Richardson check");
  return r;
}

struct SpectralDeformation {
  VecField normal;  // T_mu N
  VecField f;       // Sym at mu
  LoopConnection connection;
};

inline SpectralDeformation spectral_deform(const LoopConnection& c, double mu) {
  const GaugeField t = trivialize(c, Complex(mu, 0.0), 1e300);
  VecField n(c.grid());
  for (std::size_t v = 0; v < n.values.size(); ++v) {
    n[v] = t.gauge[v].real() * c.normal()[v];
    n[v].normalize();
  }
  SymResult s = sym(c, mu);
  return {n, std::move(s.f), LoopConnection::split(n)};
}

// Unit tangent at the base vertex at angle `angle` from the xi-direction
// toward N x (xi-direction).
inline Vec3 tangent_at_base(const LoopConnection& c, double angle) {
  // w = h N x N_xi is parallel to f_xi
  Vec3 e1 = c.rotation(0, 0);
  e1 -= e1.dot(c.normal()[0]) * c.normal()[0];
  e1.normalize();
  const Vec3 e2 = c.normal()[0].cross(e1);
  return std::cos(angle) * e1 + std::sin(angle) * e2;
}

// +i eigenvector of hat(t) for a real unit vector t.
inline CVec3 isotropic_line(const Vec3& t) {
  Vec3 e1 = std::abs(t(0)) < 0.9 ? Vec3(1, 0, 0) : Vec3(0, 1, 0);
  e1 -= e1.dot(t) * t;
  e1.normalize();
  const Vec3 e2 = t.cross(e1);
  return (e1.cast<Complex>() - Complex(0, 1) * e2.cast<Complex>()) / std::sqrt(2.0);
}

// Transport a line field from vertex 0 along the spanning tree at lambda.
inline std::vector<CVec3> transport_line(const LoopConnection& c, const CVec3& seed, Complex lambda) {
  std::vector<CVec3> l(c.grid().size());
  l[0] = seed / seed.norm();
  for_each_tree_step(c.grid(), SpanningOrder::RowThenColumns, [&](const TreeStep& s) {
    CVec3 v = c.transport(s.axis, s.edge, lambda) * l[s.from];
    l[s.to] = v / v.norm();
  });
  return l;
}

struct BacklundResult {
  DressingFactor factor;
  LoopConnection connection;  // r(lambda) d_lambda
  VecField f;                 // input surface from Sym at lambda = 1
  VecField f_hat;
  VecField normal_hat;
  double closed_form_defect = 0.0;  // |f_hat - (f - 2t/(a + 1/a))|
  double reflection_defect = 0.0;   // projective distance of rho^N L and conj(L)
};

inline BacklundResult backlund(const LoopConnection& c, double a, const Vec3& t0) {
  if (!(a > 0.0)) throw ParameterError("backlund: parameter a must be positive");
  const Vec3& n0 = c.normal()[0];
  if (std::abs(t0.norm() - 1.0) > 1e-8 || std::abs(t0.dot(n0)) > 1e-8)
    throw ParameterError("backlund: t0 must be a unit tangent vector at the base vertex");
  const Complex ia(0.0, a);
  auto lines = transport_line(c, isotropic_line(t0), ia);
  DressingFactor r = DressingFactor::from_lines(a, std::move(lines));

  BacklundResult out{r, c.dressed(r), VecField(c.grid()), VecField(c.grid()), VecField(c.grid())};
  out.f = sym(c, 1.0).f;
  const SymResult sh = sym(out.connection, 1.0);
  const Vec3 shift = r.derivative_at_one(0);
  for (std::size_t v = 0; v < c.grid().size(); ++v) {
    out.f_hat[v] = sh.f[v] - shift;
    out.normal_hat[v] = out.connection.normal()[v];
    const Vec3 expected = out.f[v] - 2.0 * r.axis[v] / (a + 1.0 / a);
    out.closed_form_defect = std::max(out.closed_form_defect, (out.f_hat[v] - expected).norm());
    const Vec3& n = c.normal()[v];
    const Mat3 refl = Mat3::Identity() - 2.0 * n * n.transpose();
    const CVec3 rl = refl.cast<Complex>() * r.line[v];
    out.reflection_defect = std::max(out.reflection_defect, projective_distance<Complex, 3>(rl, r.line[v].conjugate()));
  }
  return out;
}

// Dressing factor r_b dressed by r_a: lines r_a(ib) L_b.
inline DressingFactor redress(const DressingFactor& by, const DressingFactor& target) {
  std::vector<CVec3> lines(target.line.size());
  const Complex ib(0.0, target.a);
  for (std::size_t v = 0; v < lines.size(); ++v) lines[v] = by.at(v, ib) * target.line[v];
  return DressingFactor::from_lines(target.a, std::move(lines));
}

struct KBianchiResult {
  DressingFactor ra, rb, ra_hat, rb_hat;  // ra_hat = r_b-dressed r_a, rb_hat = r_a-dressed r_b
  VecField f, fa, fb, fab, fba;
  VecField nab, nba;
  double permutability_defect = 0.0;  // max |r^_b r_a r_b^{-1} r^_a^{-1} - 1| over vertices and samples
  double closure_defect = 0.0;        // max |f_ab - f_ba|
  double pole_growth = 0.0;           // max over circles around +-ib of |r^_b r_a r_b^{-1}| / its value at 1
};

inline KBianchiResult bianchi_quad(const LoopConnection& c, double a, double b, const Vec3& ta, const Vec3& tb,
                                   std::span<const Complex> samples) {
  if (std::abs(a - b) < 1e-12) throw ParameterError("bianchi: a and b must differ");
  const BacklundResult ba = backlund(c, a, ta);
  const BacklundResult bb = backlund(c, b, tb);
  KBianchiResult r;
  r.ra = ba.factor;
  r.rb = bb.factor;
  r.rb_hat = redress(r.ra, r.rb);
  r.ra_hat = redress(r.rb, r.ra);
  const Grid2& g = c.grid();
  r.f = ba.f;
  r.fa = ba.f_hat;
  r.fb = bb.f_hat;
  r.fab = VecField(g);
  r.fba = VecField(g);
  r.nab = VecField(g);
  r.nba = VecField(g);
  for (std::size_t v = 0; v < g.size(); ++v) {
    r.fab[v] = r.f[v] - r.ra.derivative_at_one(v) - r.rb_hat.derivative_at_one(v);
    r.fba[v] = r.f[v] - r.rb.derivative_at_one(v) - r.ra_hat.derivative_at_one(v);
    r.nab[v] = r.rb_hat.at_infinity(v) * r.ra.at_infinity(v) * c.normal()[v];
    r.nba[v] = r.ra_hat.at_infinity(v) * r.rb.at_infinity(v) * c.normal()[v];
    r.closure_defect = std::max(r.closure_defect, (r.fab[v] - r.fba[v]).norm());
    for (const Complex lam : samples) {
      const CMat3 m = r.rb_hat.at(v, lam) * r.ra.at(v, lam) * r.rb.inverse_at(v, lam) * r.ra_hat.inverse_at(v, lam);
      r.permutability_defect = std::max(r.permutability_defect, (m - CMat3::Identity()).norm());
    }
  }
  // The factor r^_b r_a r_b^{-1} has removable singularities at +-ib.
  const int ring = 16;
  const double eps = 1e-3 * b;
  for (std::size_t v = 0; v < g.size(); v += std::max<std::size_t>(1, g.size() / 64)) {
    const CMat3 at1 = r.rb_hat.at(v, 1.0) * r.ra.at(v, 1.0) * r.rb.inverse_at(v, 1.0);
    const double base = at1.norm();
    for (double sgn : {1.0, -1.0})
      for (int k = 0; k < ring; ++k) {
        const Complex lam = Complex(0.0, sgn * b) + eps * std::polar(1.0, 2.0 * M_PI * k / ring);
        const CMat3 m = r.rb_hat.at(v, lam) * r.ra.at(v, lam) * r.rb.inverse_at(v, lam);
        r.pole_growth = std::max(r.pole_growth, m.norm() / base);
      }
  }
  return r;
}

}  // namespace gaugesurf
