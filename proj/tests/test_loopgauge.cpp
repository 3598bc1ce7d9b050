#include <gtest/gtest.h>

#include "gaugesurf/ksurface.hpp"
#include "gaugesurf/loopgauge.hpp"

using namespace gaugesurf;

namespace {

const LoopConnection& pseudosphere(int per = 16) {
  static std::map<int, LoopConnection> cache;
  auto it = cache.find(per);
  if (it == cache.end()) {
    const Grid2 g(2 * per + 1, 2 * per + 1, 1.0 / per, 1.0 / per, -2.1, -2.1);
    it = cache.emplace(per, split_connection(integrate_frame(sample<double>(g, [](double x, double y) { return one_soliton(x, y); })).normal))
             .first;
  }
  return it->second;
}

}  // namespace

TEST(LoopConnection, TrivialAtLambdaOne) {
  EXPECT_LT(holonomy_residual(pseudosphere(), 1.0).max_defect, 1e-13);
  EXPECT_LT(holonomy_residual(pseudosphere(), -1.0).max_defect, 1e-10);
}

TEST(LoopConnection, TransportIsOrthogonalForRealLambda) {
  const LoopConnection& c = pseudosphere();
  const CMat3 p = c.transport(0, 7, 2.5);
  EXPECT_LT((p.transpose() * p - CMat3::Identity()).norm(), 1e-12);
  EXPECT_LT(p.imag().norm(), 1e-14);
}

TEST(LoopConnection, HolonomyDensityShrinksUnderRefinement) {
  const double coarse = holonomy_residual(pseudosphere(16), Complex(0.5, -0.3)).density;
  const double fine = holonomy_residual(pseudosphere(32), Complex(0.5, -0.3)).density;
  EXPECT_NEAR(coarse / fine, 4.0, 0.6);
}

TEST(LoopConnection, NonUnitNormalIsRejected) {
  VecField n(Grid2(3, 3, 0.1, 0.1), Vec3(0, 0, 2));
  EXPECT_THROW(split_connection(n), DataError);
}

TEST(LoopConnection, NonHarmonicGaussMapCannotBeTrivialised) {
  const int per = 16;
  const Grid2 g(2 * per + 1, 2 * per + 1, 1.0 / per, 1.0 / per, -2.1, -2.1);
  const LoopConnection c = split_connection(
      sample<Vec3>(g, [](double x, double y) { return Vec3(0.6 * x, 0.4 * y * y, 1.0 + 0.3 * x * y).normalized(); }));
  EXPECT_THROW(trivialize(c, 2.0, 1e-2), NotFlatError);
  EXPECT_NO_THROW(trivialize(pseudosphere(), 2.0, 1e-2));
}

TEST(LoopConnection, SpanningTreeDisagreementIsSecondOrder) {
  const GaugeField coarse = trivialize(pseudosphere(16), Complex(0.0, 1.0));
  const GaugeField fine = trivialize(pseudosphere(32), Complex(0.0, 1.0));
  EXPECT_NEAR(coarse.path_defect / fine.path_defect, 4.0, 0.6);
  EXPECT_LT(gauge_back_residual(pseudosphere(16), coarse), 1e-10);
}

TEST(Sym, ArgumentChecks) {
  EXPECT_THROW(sym(pseudosphere(), 0.0), ParameterError);
  EXPECT_THROW(sym(pseudosphere(), 1.0, 1e-14), NumericalDerivativeError);
  EXPECT_THROW(sym(pseudosphere(), 0.5, 0.6), NumericalDerivativeError);
}

TEST(Sym, RealFamilyGivesRealSkewSurface) {
  const SymResult s = sym(pseudosphere(), 1.0);
  EXPECT_LT(s.imaginary_part, 1e-9);
  EXPECT_LT(s.skew_defect, 1e-8);
}

TEST(Dressing, PoleAtPlusMinusIA) {
  const BacklundResult b = backlund(pseudosphere(), 0.7, tangent_at_base(pseudosphere(), 0.3));
  EXPECT_THROW(b.factor.phi(Complex(0.0, 0.7)), PoleError);
  EXPECT_THROW(b.factor.phi(Complex(0.0, -0.7)), PoleError);
  // normalised so that phi(1) = 1
  EXPECT_NEAR(std::abs(b.factor.phi(1.0) - 1.0), 0.0, 1e-14);
}

TEST(Backlund, ClosedFormAndConstants) {
  const LoopConnection& c = pseudosphere();
  const double a = 0.7;
  const BacklundResult b = backlund(c, a, tangent_at_base(c, 0.3));
  EXPECT_LT(b.closed_form_defect, 1e-10);
  EXPECT_LT(b.reflection_defect, 1e-10);
  const double dist = 2.0 / (a + 1.0 / a);
  for (std::size_t v = 0; v < c.grid().size(); v += 37) EXPECT_NEAR((b.f_hat[v] - b.f[v]).norm(), dist, 1e-9);
}

TEST(Backlund, InvalidArguments) {
  const LoopConnection& c = pseudosphere();
  EXPECT_THROW(backlund(c, 0.0, tangent_at_base(c, 0.0)), ParameterError);
  EXPECT_THROW(backlund(c, 1.2, c.normal()[0]), ParameterError);
}

TEST(Bianchi, PermutabilityHoldsAndPolesAreRemovable) {
  const LoopConnection& c = pseudosphere();
  const std::vector<Complex> samples = {1.0, 3.0, Complex(2, 1), Complex(0, 2.5)};
  const KBianchiResult r = bianchi_quad(c, 0.5, 1.5, tangent_at_base(c, 1.0), tangent_at_base(c, -0.4), samples);
  EXPECT_LT(r.permutability_defect, 1e-10);
  EXPECT_LT(r.closure_defect, 1e-10);
  EXPECT_LT(r.pole_growth, 10.0);
  EXPECT_THROW(bianchi_quad(c, 0.5, 0.5, tangent_at_base(c, 1.0), tangent_at_base(c, 1.0), samples), ParameterError);
}
