#include <gtest/gtest.h>

#include <random>

#include "gaugesurf/geomcore.hpp"

using namespace gaugesurf;

namespace {

Vec5 L(double x, double y, double z) { return lift_rep(Vec3(x, y, z)); }

// Classical cross-ratio of four points in the complex plane, in the
// convention where w = Gamma^x_y(t) z gives t.
Complex classical(Complex x, Complex y, Complex z, Complex w) { return (x - z) * (y - w) / ((x - w) * (y - z)); }

}  // namespace

TEST(Rodrigues, MatchesPadeExponential) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> n(0.0, 1.5);
  for (int k = 0; k < 50; ++k) {
    const Vec3 v(n(rng), n(rng), n(rng));
    EXPECT_LT((rodrigues(v) - expm(Mat3(hat(v)))).norm(), 1e-12);
  }
  const Vec3 tiny(1e-6, -2e-6, 3e-7);
  EXPECT_LT((rodrigues(tiny) - expm(Mat3(hat(tiny)))).norm(), 1e-15);
}

TEST(Rodrigues, ComplexArgumentMatchesExponential) {
  const Vec3 v(0.3, -1.1, 0.4);
  for (Complex z : {Complex(0.5, 0.0), Complex(-1.0, 0.7), Complex(0.0, 2.0), Complex(1e-6, 1e-6)}) {
    const CMat3 want = expm(CMat3(z * hat(v).cast<Complex>()));
    EXPECT_LT((rodrigues(v, z) - want).norm(), 1e-12) << z;
  }
}

TEST(Rodrigues, HatAndVeeAreInverse) {
  const Vec3 v(1.0, -2.0, 0.5), w(0.3, 0.2, -0.7);
  EXPECT_LT((hat(v) * w - v.cross(w)).norm(), 1e-15);
  EXPECT_LT((vee(Mat3(hat(v))) - v).norm(), 1e-15);
}

TEST(LightCone, LiftIsNullAndEncodesDistance) {
  const Vec3 x(0.2, -1.0, 3.0), y(1.5, 0.5, -0.4);
  EXPECT_NEAR(inner(lift_rep(x), lift_rep(x)), 0.0, 1e-12);
  EXPECT_NEAR(inner(lift_rep(x), lift_rep(y)), -0.5 * (x - y).squaredNorm(), 1e-12);
  EXPECT_LT((*project(lift_rep(x) * -3.0) - x).norm(), 1e-12);
  EXPECT_FALSE(project(infinity_point()).has_value());
}

TEST(LightCone, MetricVecRejectsMixedModels) {
  MetricVec<double> a{Eigen::VectorXd::Zero(5), Signature::Minkowski41};
  MetricVec<double> b{Eigen::VectorXd::Zero(3), Signature::Euclidean3};
  EXPECT_THROW(inner(a, b), ContractError);
}

TEST(NullLine, RejectsNonNullAndZero) {
  EXPECT_THROW(Point(Vec5(1, 0, 0, 0, 0)), GeometryError);
  EXPECT_THROW(Point(Vec5::Zero()), GeometryError);
  EXPECT_TRUE(Point(L(1, 2, 3)).same_as(Point(-5.0 * L(1, 2, 3))));
}

TEST(GammaMap, ScalesTheTwoLinesAndFixesTheComplement) {
  const Vec5 x = L(0.1, 0.2, 0.3), y = L(-1.0, 0.5, 2.0);
  const double t = 2.7;
  const Mat5 g = gamma_matrix<double, 5>(x, y, t);
  EXPECT_LT((g * x - t * x).norm(), 1e-12);
  EXPECT_LT((g * y - y / t).norm(), 1e-12);
  // a vector orthogonal to both
  const Mat5 j = metric<double, 5>();
  Eigen::Matrix<double, 2, 5> c;
  c.row(0) = (j * x).transpose();
  c.row(1) = (j * y).transpose();
  const Eigen::FullPivLU<Eigen::Matrix<double, 2, 5>> lu(c);
  const Eigen::MatrixXd ker = lu.kernel();
  for (int k = 0; k < ker.cols(); ++k) EXPECT_LT((g * ker.col(k) - ker.col(k)).norm(), 1e-12);
  EXPECT_NO_THROW((OrthMap<double, 5>(g, 1e-10)));
}

TEST(GammaMap, InverseSwapsTheLines) {
  const Point x(L(0.1, 0.2, 0.3)), y(L(-1.0, 0.5, 2.0));
  const GammaMap<double, 5> g(x, y, 0.4);
  EXPECT_LT((g.inverse().matrix() * g.matrix() - Mat5::Identity()).norm(), 1e-12);
  EXPECT_LT((gamma_matrix<double, 5>(x.rep(), y.rep(), 0.4) - gamma_matrix<double, 5>(y.rep(), x.rep(), 2.5)).norm(), 1e-12);
}

TEST(GammaMap, SingularInputsAreReported) {
  const Point x(L(0.1, 0.2, 0.3));
  EXPECT_THROW((GammaMap<double, 5>(x, x, 2.0)), SingularPairError);
  EXPECT_THROW((GammaMap<double, 5>(x, Point(L(1, 1, 1)), 0.0)), ParameterError);
}

TEST(CrossRatio, MatchesClassicalComplexCrossRatio) {
  const Vec3 x(0.3, 0.1, 0), y(-0.5, 0.7, 0), z(1.1, -0.4, 0);
  for (double t : {0.37, -2.0, 5.5}) {
    const Vec5 w5 = gamma_matrix<double, 5>(lift_rep(x), lift_rep(y), t) * lift_rep(z);
    const Vec3 w = *project(w5);
    EXPECT_NEAR(w(2), 0.0, 1e-12);
    const Complex cl = classical({x(0), x(1)}, {y(0), y(1)}, {z(0), z(1)}, {w(0), w(1)});
    EXPECT_NEAR(cl.real(), t, 1e-10);
    EXPECT_NEAR(cl.imag(), 0.0, 1e-10);
    EXPECT_NEAR(cross_ratio(Point(lift_rep(x)), Point(lift_rep(y)), Point(lift_rep(z)), Point(w5)).value, t, 1e-10);
  }
}

TEST(CrossRatio, Symmetries) {
  // points on the unit circle
  auto on = [](double a) { return Point(L(std::cos(a), std::sin(a), 0)); };
  const Point x = on(0.1), y = on(1.3), z = on(2.9), w = on(4.4);
  const double t = cross_ratio(x, y, z, w).value;
  EXPECT_NEAR(cross_ratio(y, x, w, z).value, t, 1e-10);
  EXPECT_NEAR(cross_ratio(z, w, x, y).value, t, 1e-10);
  EXPECT_NEAR(cross_ratio(x, y, w, z).value, 1.0 / t, 1e-10);
  EXPECT_NEAR(cross_ratio(x, z, y, w).value, 1.0 - t, 1e-10);
  EXPECT_TRUE(cross_ratio(x, y, z, x).infinite);
}

TEST(CrossRatio, RejectsNonConcircularPoints) {
  const Point a(L(0, 0, 0)), b(L(1, 0, 0)), c(L(0, 1, 0)), d(L(0, 0, 1));
  EXPECT_FALSE(concircular({a, b, c, d}));
  EXPECT_THROW(cross_ratio(a, b, c, d), GeometryError);
  EXPECT_THROW(cross_ratio(a, a, c, d), ContractError);
}

TEST(Reflection, UnitSphereIsInversion) {
  Eigen::Matrix<double, 5, Eigen::Dynamic> s(5, 1);
  s.col(0) << 0, 0, 0, 1, 0;
  const Mat5 r = reflection(s).matrix();
  for (const Vec3& x : {Vec3(0.5, 0.2, -0.1), Vec3(2.0, 1.0, 3.0)}) {
    const Vec3 img = *project(r * lift_rep(x));
    EXPECT_LT((img - x / x.squaredNorm()).norm(), 1e-12);
  }
  Eigen::Matrix<double, 5, Eigen::Dynamic> null_basis(5, 1);
  null_basis.col(0) = L(1, 2, 3);
  EXPECT_THROW(reflection(null_basis), SingularSubspaceError);
}

TEST(OrthMap, InverseIsMetricTranspose) {
  const Mat5 g = gamma_matrix<double, 5>(L(0.3, 0, 1), L(-1, 2, 0), 3.0) * gamma_matrix<double, 5>(L(1, 1, 1), L(0, 0, 0), -0.5);
  EXPECT_LT((orth_inverse(g) * g - Mat5::Identity()).norm(), 1e-11);
  EXPECT_THROW((OrthMap<double, 5>(Mat5::Identity() * 2.0)), ContractError);
}
