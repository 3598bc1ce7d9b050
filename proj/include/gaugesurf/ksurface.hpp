#pragma once

#include <algorithm>
#include <array>
#include <limits>
#include <span>
#include <vector>

#include "core.hpp"
#include "grid.hpp"

namespace gaugesurf {

// omega = 4 arctan(exp((xi + eta)/rho)) solves omega_{xi eta} = sin(omega)/rho^2.
inline double one_soliton(double xi, double eta, double rho = 1.0) {
  return 4.0 * std::atan(std::exp((xi + eta) / rho));
}

// Closed-form pseudosphere for the 1-soliton at rho = 1, up to a rigid motion.
inline Vec3 pseudosphere_point(double xi, double eta) {
  const double x = xi + eta, y = xi - eta;
  const double s = 1.0 / std::cosh(x);
  return Vec3(s * std::cos(y), s * std::sin(y), x - std::tanh(x));
}

// Characteristic (Goursat) solve of omega_{xi eta} = sin(omega)/rho^2 from
// data on the axes i = 0 and j = 0. One predictor with three corners and one
// corrector with four.
inline ScalarField solve_sine_gordon(std::span<const double> on_xi_axis, std::span<const double> on_eta_axis,
                                     double rho, const CharGrid& g) {
  g.validate();
  if (on_xi_axis.size() != static_cast<std::size_t>(g.n[0]) || on_eta_axis.size() != static_cast<std::size_t>(g.n[1]))
    throw DataError("sine-Gordon: boundary data length does not match the grid");
  if (std::abs(on_xi_axis[0] - on_eta_axis[0]) > 1e-12 * std::max(1.0, std::abs(on_xi_axis[0])))
    throw DataError("sine-Gordon: boundary data disagree at the corner");
  if (!(rho > 0.0)) throw ContractError("sine-Gordon: rho must be positive");
  ScalarField w(g);
  for (int i = 0; i < g.n[0]; ++i) w(i, 0) = on_xi_axis[i];
  for (int j = 0; j < g.n[1]; ++j) w(0, j) = on_eta_axis[j];
  const double c = g.step[0] * g.step[1] / (rho * rho);
  for (int j = 0; j + 1 < g.n[1]; ++j) {
    for (int i = 0; i + 1 < g.n[0]; ++i) {
      const double a = w(i + 1, j), b = w(i, j + 1), d = w(i, j);
      const double p = a + b - d + c * std::sin((a + b + d) / 3.0);
      w(i + 1, j + 1) = a + b - d + c * std::sin((a + b + d + p) / 4.0);
    }
  }
  return w;
}

// Vertices where the immersion degenerates (sin omega ~ 0, so the metric
// (d xi)^2 + 2 cos(omega) d xi d eta + (d eta)^2 has rank 1).
inline std::vector<std::size_t> degenerate_vertices(const ScalarField& omega, double tol = 1e-6) {
  std::vector<std::size_t> out;
  for (std::size_t v = 0; v < omega.values.size(); ++v)
    if (std::abs(std::sin(omega[v])) < tol) out.push_back(v);
  return out;
}

struct KSurface {
  VecField f;
  VecField normal;
  // max |f| difference between the two spanning orders
  double path_defect = 0.0;
};

struct FrameSeed {
  Vec3 origin = Vec3::Zero();
  Mat3 frame = Mat3::Identity();  // columns f_xi, N x f_xi, N at vertex 0
};

namespace detail {

// Cubic Lagrange interpolation of samples along a line at k + tau, using the
// stencil k-1..k+2 clamped into range. Returns value and derivative in tau.
inline std::array<double, 2> cubic_at(const std::vector<double>& v, int k, double tau) {
  const int n = static_cast<int>(v.size());
  if (n < 4) {
    const int k1 = std::min(k + 1, n - 1);
    return {v[k] + tau * (v[k1] - v[k]), v[k1] - v[k]};
  }
  const int k0 = std::clamp(k - 1, 0, n - 4);
  const double x = k + tau;
  double val = 0.0, der = 0.0;
  for (int a = 0; a < 4; ++a) {
    double basis = 1.0, dbasis = 0.0;
    for (int b = 0; b < 4; ++b) {
      if (b == a) continue;
      const double den = static_cast<double>(a - b);
      const double fac = (x - (k0 + b)) / den;
      dbasis = dbasis * fac + basis / den;
      basis *= fac;
    }
    val += basis * v[k0 + a];
    der += dbasis * v[k0 + a];
  }
  return {val, der};
}

// Phi_xi = Phi A(omega_xi), Phi_eta = Phi B(omega) for Phi = [f_xi, N x f_xi, N].
inline Mat3 gen_xi(double omega_xi, double rho) {
  Mat3 a;
  a << 0, omega_xi, 0, -omega_xi, 0, -1.0 / rho, 0, 1.0 / rho, 0;
  return a;
}
inline Mat3 gen_eta(double omega, double rho) {
  const double s = std::sin(omega) / rho, c = std::cos(omega) / rho;
  Mat3 b;
  b << 0, 0, -s, 0, 0, c, s, -c, 0;
  return b;
}

constexpr double kGauss1 = 0.5 - 0.28867513459481287;  // 1/2 - sqrt(3)/6
constexpr double kGauss2 = 0.5 + 0.28867513459481287;

// Fourth-order Magnus step for Phi' = Phi G, generators at the Gauss nodes.
inline Mat3 magnus4(const Mat3& g1, const Mat3& g2, double h) {
  const Mat3 om = 0.5 * h * (g1 + g2) + (0.14433756729740643 * h * h) * (g1 * g2 - g2 * g1);
  return rodrigues(vee(om));
}

// One step along a line. `gen(tau)` is the generator at fractional position
// tau, `tangent(tau)` the frame coordinates of the curve tangent there.
template <class Gen, class Tan>
void line_step(const Mat3& phi, const Vec3& f, double h, Gen&& gen, Tan&& tangent, Mat3& phi_next, Vec3& f_next) {
  phi_next = phi * magnus4(gen(kGauss1), gen(kGauss2), h);
  Vec3 inc = Vec3::Zero();
  for (double t : {kGauss1, kGauss2}) {
    const Mat3 sub = magnus4(gen(t * kGauss1), gen(t * kGauss2), t * h);
    inc += 0.5 * h * (phi * sub * tangent(t));
  }
  f_next = f + inc;
}

}  // namespace detail

// Reconstruct f and N from a sine-Gordon solution by integrating the
// Gauss-Weingarten frame along row 0 and then every column.
inline KSurface integrate_frame(const ScalarField& omega, double rho = 1.0, const FrameSeed& seed = {}) {
  const Grid2& g = omega.grid;
  g.validate();
  if (!(rho > 0.0)) throw ContractError("integrate_frame: rho must be positive");
  if (auto bad = degenerate_vertices(omega); !bad.empty())
    throw DegeneracyError("integrate_frame: sin(omega) vanishes, the surface is not immersed", bad.front());

  auto row_of = [&](int j) {
    std::vector<double> r(g.n[0]);
    for (int i = 0; i < g.n[0]; ++i) r[i] = omega(i, j);
    return r;
  };
  auto col_of = [&](int i) {
    std::vector<double> c(g.n[1]);
    for (int j = 0; j < g.n[1]; ++j) c[j] = omega(i, j);
    return c;
  };

  auto xi_step = [&](const std::vector<double>& row, int i, const Mat3& phi, const Vec3& f, Mat3& pn, Vec3& fn) {
    const double h = g.step[0];
    auto gen = [&](double tau) { return detail::gen_xi(detail::cubic_at(row, i, tau)[1] / h, rho); };
    auto tan = [](double) { return Vec3(1, 0, 0); };
    detail::line_step(phi, f, h, gen, tan, pn, fn);
  };
  auto eta_step = [&](const std::vector<double>& col, int j, const Mat3& phi, const Vec3& f, Mat3& pn, Vec3& fn) {
    const double h = g.step[1];
    auto gen = [&](double tau) { return detail::gen_eta(detail::cubic_at(col, j, tau)[0], rho); };
    auto tan = [&](double tau) {
      const double w = detail::cubic_at(col, j, tau)[0];
      return Vec3(std::cos(w), std::sin(w), 0.0);
    };
    detail::line_step(phi, f, h, gen, tan, pn, fn);
  };

  auto sweep = [&](SpanningOrder order) {
    std::vector<Mat3> phi(g.size());
    std::vector<Vec3> f(g.size());
    phi[0] = seed.frame;
    f[0] = seed.origin;
    if (order == SpanningOrder::RowThenColumns) {
      const auto row = row_of(0);
      for (int i = 0; i + 1 < g.n[0]; ++i)
        xi_step(row, i, phi[g.index(i, 0)], f[g.index(i, 0)], phi[g.index(i + 1, 0)], f[g.index(i + 1, 0)]);
      for (int i = 0; i < g.n[0]; ++i) {
        const auto col = col_of(i);
        for (int j = 0; j + 1 < g.n[1]; ++j)
          eta_step(col, j, phi[g.index(i, j)], f[g.index(i, j)], phi[g.index(i, j + 1)], f[g.index(i, j + 1)]);
      }
    } else {
      const auto col = col_of(0);
      for (int j = 0; j + 1 < g.n[1]; ++j)
        eta_step(col, j, phi[g.index(0, j)], f[g.index(0, j)], phi[g.index(0, j + 1)], f[g.index(0, j + 1)]);
      for (int j = 0; j < g.n[1]; ++j) {
        const auto row = row_of(j);
        for (int i = 0; i + 1 < g.n[0]; ++i)
          xi_step(row, i, phi[g.index(i, j)], f[g.index(i, j)], phi[g.index(i + 1, j)], f[g.index(i + 1, j)]);
      }
    }
    return std::make_pair(std::move(phi), std::move(f));
  };

  auto [phi, f] = sweep(SpanningOrder::RowThenColumns);
  auto alt = sweep(SpanningOrder::ColumnThenRows);

  KSurface out{VecField(g), VecField(g), 0.0};
  for (std::size_t v = 0; v < g.size(); ++v) {
    out.f[v] = f[v];
    out.normal[v] = phi[v].col(2);
    out.path_defect = std::max(out.path_defect, (f[v] - alt.second[v]).norm());
  }
  return out;
}

// Sign convention of the Lelieuvre equations rho N x N_xi = s_xi f_xi,
// rho N x N_eta = s_eta f_eta.
struct LelieuvreSigns {
  double xi = 1.0;
  double eta = -1.0;
};

struct LelieuvreResidual {
  double xi = 0.0;
  double eta = 0.0;
  double max() const { return std::max(xi, eta); }
};

inline LelieuvreResidual lelieuvre_residual(const VecField& f, const VecField& normal, double rho,
                                            LelieuvreSigns signs = {}) {
  if (!f.grid.same_shape(normal.grid)) throw ContractError("lelieuvre: f and N grids differ");
  const Grid2& g = f.grid;
  LelieuvreResidual r;
  for (int j = 0; j < g.n[1]; ++j) {
    for (int i = 0; i < g.n[0]; ++i) {
      if (!fd_interior(g, i, j)) continue;
      const Vec3 n = normal(i, j);
      const Vec3 nx = fd_first(normal, 0, i, j), ny = fd_first(normal, 1, i, j);
      const Vec3 fx = fd_first(f, 0, i, j), fy = fd_first(f, 1, i, j);
      r.xi = std::max(r.xi, (rho * n.cross(nx) - signs.xi * fx).norm());
      r.eta = std::max(r.eta, (rho * n.cross(ny) - signs.eta * fy).norm());
    }
  }
  return r;
}

// Fundamental forms from finite differences. Arrays hold (11, 12, 22)
// coefficients; `valid` marks interior, immersed vertices.
struct FundamentalForms {
  Grid2 grid;
  std::vector<std::array<double, 3>> first, second, third;
  std::vector<double> mean, gauss;
  VecField normal;
  std::vector<bool> valid;
};

inline FundamentalForms fundamental_forms(const VecField& f) {
  const Grid2& g = f.grid;
  FundamentalForms ff;
  ff.grid = g;
  const std::size_t n = g.size();
  ff.first.assign(n, {0, 0, 0});
  ff.second.assign(n, {0, 0, 0});
  ff.third.assign(n, {0, 0, 0});
  ff.mean.assign(n, 0.0);
  ff.gauss.assign(n, 0.0);
  ff.valid.assign(n, false);
  ff.normal = VecField(g, Vec3::Zero());

  const VecField fx = fd_field(f, 0), fy = fd_field(f, 1);
  std::vector<bool> immersed(n, false);
  for (std::size_t v = 0; v < n; ++v) {
    const Vec3 c = fx[v].cross(fy[v]);
    const double cn = c.norm();
    if (cn > 1e-10 * fx[v].norm() * fy[v].norm() && cn > 0.0) {
      ff.normal[v] = c / cn;
      immersed[v] = true;
    }
  }
  const VecField nx = fd_field(ff.normal, 0), ny = fd_field(ff.normal, 1);
  for (int j = 0; j < g.n[1]; ++j) {
    for (int i = 0; i < g.n[0]; ++i) {
      const std::size_t v = g.index(i, j);
      if (!immersed[v]) continue;
      const Vec3 a = fx[v], b = fy[v], nv = ff.normal[v];
      const Vec3 fxx = fd_second(f, 0, i, j), fyy = fd_second(f, 1, i, j);
      const Vec3 fxy = fd_first(fy, 0, i, j);
      const double e = a.dot(a), fm = a.dot(b), gg = b.dot(b);
      const double l = fxx.dot(nv), m = fxy.dot(nv), nn = fyy.dot(nv);
      const double det = e * gg - fm * fm;
      ff.first[v] = {e, fm, gg};
      ff.second[v] = {l, m, nn};
      ff.third[v] = {nx[v].dot(nx[v]), nx[v].dot(ny[v]), ny[v].dot(ny[v])};
      ff.gauss[v] = (l * nn - m * m) / det;
      ff.mean[v] = (e * nn - 2.0 * fm * m + gg * l) / (2.0 * det);
      // III differentiates N, which is only 4th-order accurate from index 2 inward
      ff.valid[v] = i >= 4 && i <= g.n[0] - 5 && j >= 4 && j <= g.n[1] - 5;
    }
  }
  return ff;
}

// max over valid vertices of |K - target|
inline double curvature_deviation(const FundamentalForms& ff, double target) {
  double d = 0.0;
  for (std::size_t v = 0; v < ff.gauss.size(); ++v)
    if (ff.valid[v]) d = std::max(d, std::abs(ff.gauss[v] - target));
  return d;
}

// Relative residual of III - 2H II + K I = 0.
inline double cayley_hamilton_residual(const FundamentalForms& ff) {
  double worst = 0.0;
  for (std::size_t v = 0; v < ff.gauss.size(); ++v) {
    if (!ff.valid[v]) continue;
    const auto &i1 = ff.first[v], &i2 = ff.second[v], &i3 = ff.third[v];
    double num = 0.0, n1 = 0.0, n2 = 0.0, n3 = 0.0;
    for (int k = 0; k < 3; ++k) {
      const double w = k == 1 ? 2.0 : 1.0;  // off-diagonal counted twice
      const double r = i3[k] - 2.0 * ff.mean[v] * i2[k] + ff.gauss[v] * i1[k];
      num += w * r * r;
      n1 += w * i1[k] * i1[k];
      n2 += w * i2[k] * i2[k];
      n3 += w * i3[k] * i3[k];
    }
    const double scale = std::sqrt(n3) + 2.0 * std::abs(ff.mean[v]) * std::sqrt(n2) + std::abs(ff.gauss[v]) * std::sqrt(n1);
    if (scale > 0.0) worst = std::max(worst, std::sqrt(num) / scale);
  }
  return worst;
}

struct TchebyshevReport {
  double xi = 0.0;   // max | |f_xi| - 1 |
  double eta = 0.0;  // max | |f_eta| - 1 |
  bool pass = false;
  double max() const { return std::max(xi, eta); }
};

inline TchebyshevReport check_tchebyshev(const VecField& f, double tol) {
  TchebyshevReport r;
  const Grid2& g = f.grid;
  for (int j = 0; j < g.n[1]; ++j)
    for (int i = 0; i < g.n[0]; ++i) {
      if (!fd_interior(g, i, j)) continue;
      r.xi = std::max(r.xi, std::abs(fd_first(f, 0, i, j).norm() - 1.0));
      r.eta = std::max(r.eta, std::abs(fd_first(f, 1, i, j).norm() - 1.0));
    }
  r.pass = r.max() <= tol;
  return r;
}

}  // namespace gaugesurf
