#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "discretei.hpp"
#include "isothermic.hpp"
#include "ksurface.hpp"
#include "loopgauge.hpp"
#include "report.hpp"

namespace gaugesurf {

struct VerifyOptions {
  Tolerances tol;
  double grid_scale = 1.0;  // multiplies every smooth-surface resolution
  std::uint64_t seed = 1;
  bool lelieuvre_flip = false;  // mutation control: wrong sign in the Lelieuvre check
};

namespace verify {

using Clock = std::chrono::steady_clock;
inline double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// Number of cells per unit length at a base resolution, scaled.
inline int cells(int base, double scale) { return std::max(2, static_cast<int>(std::lround(base * scale))); }

inline std::string fmt(double x) {
  char b[32];
  std::snprintf(b, sizeof b, "%g", x);
  return b;
}
inline std::string fmt(Complex z) {
  if (z.imag() == 0.0) return fmt(z.real());
  return fmt(z.real()) + (z.imag() < 0 ? "" : "+") + fmt(z.imag()) + "i";
}

// Pseudosphere patch [-2.1, -0.1]^2 from closed-form 1-soliton samples.
inline KSurface pseudosphere_patch(int per_unit) {
  const int n = 2 * per_unit + 1;
  const double h = 1.0 / per_unit;
  const Grid2 g(n, n, h, h, -2.1, -2.1);
  return integrate_frame(sample<double>(g, [](double x, double y) { return one_soliton(x, y); }));
}

// A Gauss map that is not harmonic: a generic chart of the sphere.
inline VecField nonharmonic_normal(int per_unit) {
  const int n = 2 * per_unit + 1;
  const double h = 1.0 / per_unit;
  const Grid2 g(n, n, h, h, -2.1, -2.1);
  return sample<Vec3>(g, [](double x, double y) { return Vec3(0.6 * x, 0.4 * y * y, 1.0 + 0.3 * x * y).normalized(); });
}

inline Grid2 unit_square(int per_unit, double ox = 0.0, double oy = 0.0) {
  const double h = 1.0 / per_unit;
  return Grid2(per_unit + 1, per_unit + 1, h, h, ox, oy);
}

inline double ratio_dev(double coarse, double fine) { return std::abs(coarse / fine - 4.0); }

// Entry for a refinement ratio that must lie in 4 +- window.
inline Entry ratio_entry(const std::string& name, const std::string& module, double coarse, double fine,
                         const Tolerances& tol, const std::string& key) {
  return make_entry(name, module, ratio_dev(coarse, fine), tol.upper(key));
}

}  // namespace verify

struct Criterion {
  int id;
  std::string title;
  std::function<void(const VerifyOptions&, Report&)> run;
};

// 1. Sine-Gordon solver: second-order convergence on the 1-soliton over [-2, 2]^2.
inline void criterion_sine_gordon(const VerifyOptions& o, Report& r) {
  using namespace verify;
  const auto t0 = Clock::now();
  const Tolerances& tol = o.tol;
  std::vector<double> errs;
  json table = json::array();
  for (int base : {16, 32}) {
    const int per = cells(base, o.grid_scale);
    const double h = 1.0 / per;
    const int n = 4 * per + 1;
    const Grid2 g(n, n, h, h, -2.0, -2.0);
    std::vector<double> ax(n), ay(n);
    for (int k = 0; k < n; ++k) {
      ax[k] = one_soliton(g.coord(0, k), g.coord(1, 0));
      ay[k] = one_soliton(g.coord(0, 0), g.coord(1, k));
    }
    const ScalarField w = solve_sine_gordon(ax, ay, 1.0, g);
    double e = 0.0;
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) e = std::max(e, std::abs(w(i, j) - one_soliton(g.coord(0, i), g.coord(1, j))));
    errs.push_back(e);
    table.push_back({{"h", h}, {"max_error", e}});
  }
  r.tables["sine_gordon"] = table;
  r.add(ratio_entry("sine_gordon.error_ratio_minus_4", "ksurface", errs[0], errs[1], tol, "sg.ratio_window"));
  r.add(make_entry("sine_gordon.max_error_fine", "ksurface", errs[1], tol.upper("sg.max_error")));
  r.add(make_entry("sine_gordon.runtime_s", "ksurface", seconds_since(t0), tol.upper("sg.runtime_s")));
}

// 2. K-surface reconstruction on the pseudosphere patch.
inline void criterion_ksurface(const VerifyOptions& o, Report& r) {
  using namespace verify;
  const auto t0 = Clock::now();
  const Tolerances& tol = o.tol;
  const KSurface ks = pseudosphere_patch(cells(32, o.grid_scale));
  const FundamentalForms ff = fundamental_forms(ks.f);
  const TchebyshevReport tch = check_tchebyshev(ks.f, tol.upper("ks.tchebyshev"));
  LelieuvreSigns signs;
  if (o.lelieuvre_flip) signs.eta = -signs.eta;
  const LelieuvreResidual lel = lelieuvre_residual(ks.f, ks.normal, 1.0, signs);
  r.add(make_entry("ksurface.gauss_curvature_deviation", "ksurface", curvature_deviation(ff, -1.0), tol.upper("ks.curvature")));
  r.add(make_entry("ksurface.cayley_hamilton_residual", "ksurface", cayley_hamilton_residual(ff), tol.upper("ks.cayley_hamilton")));
  r.add(make_entry("ksurface.tchebyshev_deviation", "ksurface", tch.max(), tol.upper("ks.tchebyshev")));
  r.add(make_entry("ksurface.lelieuvre_residual", "ksurface", lel.max(), tol.upper("ks.lelieuvre")));
  r.add(make_entry("ksurface.path_defect", "ksurface", ks.path_defect, tol.upper("ks.path_defect")));
  r.add(make_entry("ksurface.runtime_s", "ksurface", seconds_since(t0), tol.upper("ks.runtime_s")));
}

// 3. Flatness of the loop of connections, with a non-harmonic control.
inline void criterion_loop_flatness(const VerifyOptions& o, Report& r) {
  using namespace verify;
  const auto t0 = Clock::now();
  const Tolerances& tol = o.tol;
  const std::vector<Complex> generic = {Complex(2.0, 0.0), Complex(0.5, 0.0), Complex(0.0, 1.0), Complex(0.5, -0.3)};
  const std::vector<Complex> exact = {Complex(1.0, 0.0), Complex(-1.0, 0.0)};
  std::vector<std::vector<double>> dens(generic.size());
  std::vector<double> exact_worst(2, 0.0), control;
  json table = json::array();
  for (int base : {32, 64}) {
    const int per = cells(base, o.grid_scale);
    const LoopConnection c = split_connection(pseudosphere_patch(per).normal);
    json row{{"h", 1.0 / per}};
    for (std::size_t k = 0; k < generic.size(); ++k) {
      dens[k].push_back(holonomy_residual(c, generic[k]).density);
      row["lambda=" + fmt(generic[k])] = dens[k].back();
    }
    for (std::size_t k = 0; k < exact.size(); ++k) {
      const double d = holonomy_residual(c, exact[k]).density;
      exact_worst[k] = std::max(exact_worst[k], d);
      row["lambda=" + fmt(exact[k])] = d;
    }
    control.push_back(holonomy_residual(split_connection(nonharmonic_normal(per)), Complex(2.0, 0.0)).density);
    row["control lambda=2"] = control.back();
    table.push_back(row);
  }
  r.tables["loop_holonomy_density"] = table;
  for (std::size_t k = 0; k < generic.size(); ++k) {
    const std::string tag = "loop.holonomy[lambda=" + fmt(generic[k]) + "]";
    r.add(make_entry(tag + ".coarse", "loopgauge", dens[k][0], tol.upper("loop.holonomy")));
    r.add(ratio_entry(tag + ".refinement_ratio_minus_4", "loopgauge", dens[k][0], dens[k][1], tol, "loop.ratio_window"));
  }
  for (std::size_t k = 0; k < exact.size(); ++k)
    r.add(make_entry("loop.holonomy[lambda=" + fmt(exact[k]) + "].max", "loopgauge", exact_worst[k], tol.upper("loop.exact")));
  r.add(make_entry("loop.control.coarse", "loopgauge", control[0], tol.lower("loop.control_min"), Bound::Lower));
  r.add(make_entry("loop.control.fine_over_coarse", "loopgauge", control[1] / control[0], 1.0 / tol.scale(), Bound::Lower));
  r.add(make_entry("loop.runtime_s", "loopgauge", seconds_since(t0), tol.upper("loop.runtime_s")));
}

// 4. Sym formula at mu = 1 and the Lie transform at mu = 2.
inline void criterion_sym(const VerifyOptions& o, Report& r) {
  using namespace verify;
  const Tolerances& tol = o.tol;
  const KSurface ks = pseudosphere_patch(cells(32, o.grid_scale));
  const LoopConnection c = split_connection(ks.normal);
  const SymResult s = sym(c, 1.0);
  const Vec3 shift = s.f[0] - ks.f[0];
  double dev = 0.0;
  for (std::size_t v = 0; v < s.f.values.size(); ++v) dev = std::max(dev, (s.f[v] - shift - ks.f[v]).norm());
  r.add(make_entry("sym.mu1_deviation", "loopgauge", dev, tol.upper("loop.sym")));

  const double mu = 2.0;
  const SpectralDeformation sd = spectral_deform(c, mu);
  const VecField fx = fd_field(sd.f, 0), fy = fd_field(sd.f, 1);
  const Grid2& g = c.grid();
  double e11 = 0.0, e12 = 0.0, e22 = 0.0;
  for (int j = 0; j < g.n[1]; ++j)
    for (int i = 0; i < g.n[0]; ++i) {
      if (!fd_interior(g, i, j)) continue;
      const std::size_t v = g.index(i, j);
      const double w = one_soliton(g.coord(0, i), g.coord(1, j));
      e11 = std::max(e11, std::abs(fx[v].squaredNorm() - mu * mu));
      e12 = std::max(e12, std::abs(fx[v].dot(fy[v]) - std::cos(w)));
      e22 = std::max(e22, std::abs(fy[v].squaredNorm() - 1.0 / (mu * mu)));
    }
  r.add(make_entry("lie.mu2.E_minus_mu2", "loopgauge", e11, tol.upper("loop.lie")));
  r.add(make_entry("lie.mu2.F_minus_cos_omega", "loopgauge", e12, tol.upper("loop.lie")));
  r.add(make_entry("lie.mu2.G_minus_inv_mu2", "loopgauge", e22, tol.upper("loop.lie")));
}

// Seeds for which both transforms stay immersed on the patch.
struct BacklundSeed {
  double a;
  double angle;
};
inline const std::vector<BacklundSeed>& backlund_seeds() {
  static const std::vector<BacklundSeed> s = {{0.5, M_PI / 3.0}, {1.5, -M_PI / 3.0}};
  return s;
}

// 5. Baecklund transforms: constant distance and normal angle.
inline void criterion_backlund(const VerifyOptions& o, Report& r) {
  using namespace verify;
  const Tolerances& tol = o.tol;
  const LoopConnection c = split_connection(pseudosphere_patch(cells(32, o.grid_scale)).normal);
  json table = json::array();
  for (const auto& seed : backlund_seeds()) {
    const double a = seed.a;
    const BacklundResult b = backlund(c, a, tangent_at_base(c, seed.angle));
    double dmin = 1e300, dmax = -1e300, nmin = 1e300, nmax = -1e300;
    for (std::size_t v = 0; v < c.grid().size(); ++v) {
      const double d = (b.f_hat[v] - b.f[v]).norm(), nn = b.normal_hat[v].dot(c.normal()[v]);
      dmin = std::min(dmin, d);
      dmax = std::max(dmax, d);
      nmin = std::min(nmin, nn);
      nmax = std::max(nmax, nn);
    }
    const double dist = 2.0 / (a + 1.0 / a), ndot = (1.0 / a - a) / (1.0 / a + a);
    const std::string tag = "backlund[a=" + fmt(a) + "]";
    r.add(make_entry(tag + ".distance_spread", "loopgauge", dmax - dmin, tol.upper("bk.constant")));
    r.add(make_entry(tag + ".distance_error", "loopgauge", std::max(std::abs(dmax - dist), std::abs(dmin - dist)), tol.upper("bk.constant")));
    r.add(make_entry(tag + ".normal_dot_spread", "loopgauge", nmax - nmin, tol.upper("bk.constant")));
    r.add(make_entry(tag + ".normal_dot_error", "loopgauge", std::max(std::abs(nmax - ndot), std::abs(nmin - ndot)), tol.upper("bk.constant")));
    r.add(make_entry(tag + ".gauss_curvature_deviation", "loopgauge", curvature_deviation(fundamental_forms(b.f_hat), -1.0),
                     tol.upper("bk.curvature")));
    table.push_back({{"a", a}, {"distance", {dmin, dmax}}, {"expected_distance", dist}, {"normal_dot", {nmin, nmax}},
                     {"expected_normal_dot", ndot}});
  }
  r.tables["backlund"] = table;
}

// 6. Bianchi permutability of two Baecklund transforms.
inline void criterion_k_bianchi(const VerifyOptions& o, Report& r) {
  using namespace verify;
  const Tolerances& tol = o.tol;
  const LoopConnection c = split_connection(pseudosphere_patch(cells(32, o.grid_scale)).normal);
  const auto& s = backlund_seeds();
  const std::vector<Complex> samples = {Complex(1.0, 0.0), Complex(3.0, 0.0), Complex(0.4, 0.0), Complex(2.0, 1.0),
                                        Complex(-0.7, 0.2), Complex(0.0, 2.5)};
  const KBianchiResult b = bianchi_quad(c, s[0].a, s[1].a, tangent_at_base(c, s[0].angle), tangent_at_base(c, s[1].angle), samples);
  r.add(make_entry("k_bianchi.permutability_defect", "loopgauge", b.permutability_defect, tol.upper("bk.permutability")));
  r.add(make_entry("k_bianchi.closure", "loopgauge", b.closure_defect, tol.upper("bk.closure")));
}

// 7. Smooth isothermic surfaces: closedness of eta, Christoffel and Darboux.
inline void criterion_isothermic(const VerifyOptions& o, Report& r) {
  using namespace verify;
  const Tolerances& tol = o.tol;
  std::vector<double> cyl, cat, ctl;
  json table = json::array();
  for (int base : {32, 64}) {
    const int per = cells(base, o.grid_scale);
    cyl.push_back(eta_closedness(build_eta(make_cylinder(unit_square(per)))).density);
    cat.push_back(eta_closedness(build_eta(make_catenoid(unit_square(per, 0.2, 0.0)))).density);
    ctl.push_back(eta_closedness(build_eta(make_graph_control(unit_square(per, 0.1, 0.1)))).density);
    table.push_back({{"h", 1.0 / per}, {"cylinder", cyl.back()}, {"catenoid", cat.back()}, {"graph_control", ctl.back()}});
  }
  r.tables["deta_density"] = table;
  r.add(ratio_entry("iso.deta.cylinder.refinement_ratio_minus_4", "isothermic", cyl[0], cyl[1], tol, "iso.ratio_window"));
  r.add(ratio_entry("iso.deta.catenoid.refinement_ratio_minus_4", "isothermic", cat[0], cat[1], tol, "iso.ratio_window"));
  r.add(make_entry("iso.deta.control.fine", "isothermic", ctl[1], tol.lower("iso.control_min"), Bound::Lower));
  r.add(make_entry("iso.deta.control.fine_over_coarse", "isothermic", ctl[1] / ctl[0], 1.0 / tol.scale(), Bound::Lower));

  const int per = cells(64, o.grid_scale);
  // catenoid: the dual is its Gauss map up to homothety
  const CurvatureLinePatch catp = make_catenoid(unit_square(per, 0.2, 0.0));
  const ChristoffelResult ck = christoffel_dual(catp);
  const auto [nk, hk] = normal_and_mean_curvature(catp.points());
  const auto [sk, rk] = fit_homothety(ck.dual, nk);
  r.add(make_entry("christoffel.catenoid_vs_gauss_map", "isothermic", std::max(std::abs(std::abs(sk) - 1.0), rk),
                   tol.upper("iso.christoffel")));
  // cylinder: the dual is the parallel surface f + N/H
  const CurvatureLinePatch cylp = make_cylinder(unit_square(per));
  const ChristoffelResult cc = christoffel_dual(cylp);
  const VecField fc = cylp.points();
  const auto [nc, hc] = normal_and_mean_curvature(fc);
  VecField target(fc.grid);
  for (std::size_t v = 0; v < target.values.size(); ++v) target[v] = fc[v] + nc[v] / hc[v];
  const auto [sc, rc] = fit_homothety(cc.dual, target);
  r.add(make_entry("christoffel.cylinder_vs_parallel_surface", "isothermic", std::max(std::abs(std::abs(sc) - 1.0), rc),
                   tol.upper("iso.christoffel")));
  const ChristoffelResult twice = christoffel_dual(CurvatureLinePatch::from_points(ck.dual));
  const auto [si, ri] = fit_homothety(twice.dual, catp.points());
  r.add(make_entry("christoffel.involution", "isothermic", std::max(std::abs(si - 1.0), ri), tol.upper("iso.involution")));

  const DarbouxResult d = darboux(cylp, build_eta(cylp), -2.0, lift_rep(Vec3(0.3, -0.8, 0.5)));
  r.add(make_entry("iso_darboux.singular_vertices", "isothermic", static_cast<double>(d.singular.size()), 0.0));
  r.add(make_entry("iso_darboux.invariants", "isothermic", patch_invariants(d.patch).max(), tol.upper("iso.invariants")));
  r.add(make_entry("iso_darboux.tangency", "isothermic", d.tangency, tol.upper("iso.invariants")));
}

// 8. Bianchi quadrilaterals and cubes of Darboux transforms, parameters (1, 2, 3).
inline void criterion_iso_bianchi(const VerifyOptions& o, Report& r) {
  using namespace verify;
  const Tolerances& tol = o.tol;
  const CurvatureLinePatch f = make_cylinder(unit_square(cells(16, o.grid_scale)));
  const RetractionForm eta = build_eta(f);
  const double a = 1.0, b = 2.0, c = 3.0;
  auto transform = [&](double p, const Vec3& seed) { return darboux(f, eta, p, lift_rep(seed)).patch.lift; };
  const auto fa = transform(a, Vec3(0.3, -0.8, 0.5)), fb = transform(b, Vec3(-0.6, 0.4, 1.2)),
             fc = transform(c, Vec3(0.9, 0.7, -0.4));
  const std::vector<double> ts = {-1.0, 0.3, 5.0};
  const IsoBianchiReport q = bianchi_quad(f.lift, fa, fb, a, b, ts);
  const CubeReport cube = bianchi_cube(f.lift, fa, fb, fc, a, b, c);
  r.add(make_entry("iso_bianchi.candidate_agreement", "isothermic", q.closure, tol.upper("iso.algebraic")));
  r.add(make_entry("iso_bianchi.cross_ratio_error", "isothermic", q.cross_ratio_error, tol.upper("iso.algebraic")));
  r.add(make_entry("iso_bianchi.gamma_identity", "isothermic", q.matrix_identity, tol.upper("iso.algebraic")));
  r.add(make_entry("iso_bianchi.non_concircular", "isothermic", q.concircular ? 0.0 : 1.0, 0.0));
  r.add(make_entry("iso_cube.closure", "isothermic", cube.closure, tol.upper("iso.algebraic")));
  r.add(make_entry("iso_cube.cross_ratio_error", "isothermic", cube.cross_ratio_error, tol.upper("iso.algebraic")));
  r.add(make_entry("iso_cube.non_concircular", "isothermic", cube.concircular ? 0.0 : 1.0, 0.0));
}

// 9. Discrete isothermic nets on 30x30 grids.
inline void criterion_discrete(const VerifyOptions& o, Report& r) {
  using namespace verify;
  const auto t0 = Clock::now();
  const Tolerances& tol = o.tol;
  // Discrete nets carry no discretisation error, so --grid-scale leaves the
  // 30x30 lattices alone; larger lattices only accumulate round-off.
  const int n = 30;
  const double ts[] = {-2.0, -0.5, 0.37, 1.9, 7.0};
  struct Seed {
    const char* name;
    QuadMap f;
    EdgeWeights a;
  };
  std::vector<Seed> seeds;
  {
    Seed p{"plane", {}, {}};
    p.f = planar_grid(n, n, 1.5 / n, 2.1 / n, &p.a);
    seeds.push_back(std::move(p));
    Seed c{"cylinder", {}, {}};
    c.f = cylinder_grid(n, n, 3.0 / n, 3.0 / n, &c.a);
    seeds.push_back(std::move(c));
  }
  const Vec5 y0 = lift_rep(Vec3(0.3, -0.4, 0.5)), y1 = lift_rep(Vec3(-0.5, 0.2, 0.7));
  for (const Seed& s : seeds) {
    const std::string tag = std::string("discrete.") + s.name;
    double flat = 0.0, ctl = 0.0;
    const QuadMap bent = perturbed(s.f, 1e-2, o.seed);
    for (double t : ts) {
      flat = std::max(flat, flatness(connection(s.f, s.a, t)).max_defect);
      ctl = std::max(ctl, flatness(connection(bent, s.a, t)).max_defect);
    }
    r.add(make_entry(tag + ".isothermic_defect", "discretei", is_isothermic(s.f, s.a, 1.0).max_defect, tol.upper("disc.flat")));
    r.add(make_entry(tag + ".flatness_defect", "discretei", flat, tol.upper("disc.flat")));
    r.add(make_entry(tag + ".perturbed.isothermic_defect", "discretei", is_isothermic(bent, s.a, 1e300).max_defect,
                     tol.lower("disc.control_min"), Bound::Lower));
    r.add(make_entry(tag + ".perturbed.flatness_defect", "discretei", ctl, tol.lower("disc.control_min"), Bound::Lower));

    const DiscreteDarbouxResult d = darboux(s.f, s.a, 10.0, y0);
    r.add(make_entry(tag + ".darboux.cross_ratio_spread", "discretei", d.cross_ratio_spread, tol.upper("disc.spread")));
    r.add(make_entry(tag + ".darboux.singular_vertices", "discretei", static_cast<double>(d.singular.size()), 0.0));

    const TripleSystem tri = triple_system(s.f, s.a, {10.0, 20.0}, {y0, y1});
    r.add(make_entry(tag + ".triple_system.level_defect", "discretei", tri.level_defect, tol.upper("disc.triple")));

    const double s1 = 0.37, s2 = -0.2;
    const DiscreteTTransform ta = t_transform(s.f, s.a, s1);
    const DiscreteTTransform tb = t_transform(ta.map, ta.weights, s2);
    const DiscreteTTransform tc = t_transform(s.f, s.a, s1 + s2);
    double gp = 0.0;
    for (std::size_t v = 0; v < s.f.size(); ++v) gp = std::max(gp, projective_distance<double, 5>(tb.map[v], tc.map[v]));
    r.add(make_entry(tag + ".t_transform.group_property", "discretei", gp, tol.upper("disc.group")));
  }
  r.add(make_entry("discrete.runtime_s", "discretei", seconds_since(t0), tol.upper("disc.runtime_s")));
}

inline const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> c = {
      {1, "sine-Gordon convergence", criterion_sine_gordon},
      {2, "K-surface reconstruction", criterion_ksurface},
      {3, "loop flatness", criterion_loop_flatness},
      {4, "Sym formula and Lie transform", criterion_sym},
      {5, "Baecklund constants", criterion_backlund},
      {6, "Bianchi permutability (K-surfaces)", criterion_k_bianchi},
      {7, "smooth isothermic surfaces", criterion_isothermic},
      {8, "Bianchi quadrilateral and cube (isothermic)", criterion_iso_bianchi},
      {9, "discrete isothermic suite", criterion_discrete},
  };
  return c;
}

// Run one criterion; a library exception becomes a failing entry.
inline Report run_criterion(const Criterion& c, const VerifyOptions& o) {
  Report r;
  r.scenario = {{"criterion", c.id}, {"title", c.title}};
  try {
    c.run(o, r);
  } catch (const std::exception& e) {
    Entry x = make_entry("criterion" + std::to_string(c.id) + ".exception", "cli_io", 1.0, 0.0);
    r.add(x);
    r.extra["exception"] = e.what();
  }
  return r;
}

// The whole suite as one report.
inline Report verify_all(const VerifyOptions& o) {
  const auto t0 = verify::Clock::now();
  Report all;
  all.scenario = {{"name", "verify-all"},
                  {"grid_scale", o.grid_scale},
                  {"tol_scale", o.tol.scale()},
                  {"seed", o.seed},
                  {"lelieuvre_flip", o.lelieuvre_flip}};
  for (const Criterion& c : criteria()) {
    Report r = run_criterion(c, o);
    for (auto& e : r.entries) all.add(std::move(e));
    for (auto& [k, v] : r.tables.items()) all.tables[k] = v;
    if (r.extra.contains("exception")) all.extra["criterion" + std::to_string(c.id) + "_exception"] = r.extra["exception"];
  }
  all.add(make_entry("suite.runtime_s", "cli_io", verify::seconds_since(t0), o.tol.upper("suite.runtime_s")));
  return all;
}

}  // namespace gaugesurf
