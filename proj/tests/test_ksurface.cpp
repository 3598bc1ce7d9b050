#include <gtest/gtest.h>

#include "gaugesurf/ksurface.hpp"

using namespace gaugesurf;

namespace {

// Sphere of radius r in Mercator coordinates (conformal, curvature-line).
VecField sphere(double r, int n) {
  const double h = 1.0 / (n - 1);
  return sample<Vec3>(Grid2(n, n, h, h, -0.5, 0.2), [r](double x, double y) {
    const double s = 1.0 / std::cosh(x);
    return Vec3(r * s * std::cos(y), r * s * std::sin(y), r * std::tanh(x));
  });
}

Grid2 patch_grid(int per) { return Grid2(2 * per + 1, 2 * per + 1, 1.0 / per, 1.0 / per, -2.1, -2.1); }

}  // namespace

TEST(FundamentalForms, SphereOfRadiusTwo) {
  const FundamentalForms ff = fundamental_forms(sphere(2.0, 81));
  int checked = 0;
  for (std::size_t v = 0; v < ff.gauss.size(); ++v) {
    if (!ff.valid[v]) continue;
    ++checked;
    EXPECT_NEAR(ff.gauss[v], 0.25, 1e-4);
    EXPECT_NEAR(std::abs(ff.mean[v]), 0.5, 1e-4);
  }
  EXPECT_GT(checked, 1000);
  EXPECT_LT(cayley_hamilton_residual(ff), 1e-6);
}

TEST(FundamentalForms, OnlyDeepInteriorIsValid) {
  const FundamentalForms ff = fundamental_forms(sphere(1.0, 12));
  const Grid2& g = ff.grid;
  EXPECT_FALSE(ff.valid[g.index(3, 5)]);
  EXPECT_TRUE(ff.valid[g.index(4, 5)]);
  EXPECT_TRUE(ff.valid[g.index(7, 7)]);
  EXPECT_FALSE(ff.valid[g.index(8, 7)]);
}

TEST(SineGordon, ReproducesTheSolitonAtSecondOrder) {
  std::vector<double> errs;
  for (int per : {8, 16}) {
    const double h = 1.0 / per;
    const Grid2 g(2 * per + 1, 2 * per + 1, h, h, -1.0, -1.0);
    std::vector<double> ax(g.n[0]), ay(g.n[1]);
    for (int k = 0; k < g.n[0]; ++k) ax[k] = one_soliton(g.coord(0, k), -1.0);
    for (int k = 0; k < g.n[1]; ++k) ay[k] = one_soliton(-1.0, g.coord(1, k));
    const ScalarField w = solve_sine_gordon(ax, ay, 1.0, g);
    double e = 0.0;
    for (int j = 0; j < g.n[1]; ++j)
      for (int i = 0; i < g.n[0]; ++i) e = std::max(e, std::abs(w(i, j) - one_soliton(g.coord(0, i), g.coord(1, j))));
    errs.push_back(e);
  }
  EXPECT_NEAR(errs[0] / errs[1], 4.0, 0.6);
}

TEST(SineGordon, RejectsInconsistentBoundaryData) {
  const Grid2 g(5, 5, 0.1, 0.1);
  std::vector<double> ax(5, 1.0), ay(5, 1.0), short_axis(4, 1.0);
  EXPECT_THROW(solve_sine_gordon(short_axis, ay, 1.0, g), DataError);
  ay[0] = 2.0;
  EXPECT_THROW(solve_sine_gordon(ax, ay, 1.0, g), DataError);
  ay[0] = 1.0;
  EXPECT_THROW(solve_sine_gordon(ax, ay, -1.0, g), ContractError);
}

TEST(KSurface, PseudospherePatchIsTchebyshevAndLelieuvre) {
  const KSurface ks = integrate_frame(sample<double>(patch_grid(32), [](double x, double y) { return one_soliton(x, y); }));
  EXPECT_LT(curvature_deviation(fundamental_forms(ks.f), -1.0), 1e-3);
  EXPECT_TRUE(check_tchebyshev(ks.f, 1e-4).pass);
  EXPECT_LT(lelieuvre_residual(ks.f, ks.normal, 1.0).max(), 1e-4);
  // pseudosphere closed form, up to a rigid motion: compare a distance
  const Vec3 d = ks.f(10, 20) - ks.f(40, 5);
  const Vec3 p = pseudosphere_point(ks.f.grid.coord(0, 10), ks.f.grid.coord(1, 20)) -
                 pseudosphere_point(ks.f.grid.coord(0, 40), ks.f.grid.coord(1, 5));
  EXPECT_NEAR(d.norm(), p.norm(), 1e-5);
}

TEST(KSurface, LelieuvreFailsForTheSphere) {
  // N = f / r on a sphere: N x N_x is orthogonal to f_x, never equal to it
  const VecField f = sphere(1.0, 41);
  EXPECT_GT(lelieuvre_residual(f, f, 1.0).max(), 0.5);
}

TEST(KSurface, DegenerateAngleIsReported) {
  const ScalarField w(patch_grid(4), 0.0);
  EXPECT_THROW(integrate_frame(w), DegeneracyError);
  EXPECT_FALSE(degenerate_vertices(w).empty());
}
