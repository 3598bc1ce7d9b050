#include <gtest/gtest.h>

#include "gaugesurf/discretei.hpp"

using namespace gaugesurf;

namespace {
const Vec5 kSeed = lift_rep(Vec3(0.3, -0.4, 0.5));
}

TEST(QuadMap, IndexingAndNeighbours) {
  QuadMap m({3, 4, 2});
  EXPECT_EQ(m.size(), 24u);
  const std::size_t v = m.index(1, 2, 1);
  EXPECT_EQ(m.coords(v), (std::array<int, 3>{1, 2, 1}));
  EXPECT_EQ(m.neighbour(v, 0), m.index(2, 2, 1));
  EXPECT_EQ(m.neighbour(m.index(2, 0, 0), 0), static_cast<std::size_t>(-1));
  EXPECT_THROW(QuadMap({1, 4, 1}).validate(), ContractError);
}

TEST(Isothermic, SquareGridHasFactorisingFunction) {
  EdgeWeights a;
  const QuadMap f = planar_grid(6, 5, 0.2, 0.3, &a);
  EXPECT_NEAR(a.per_axis[0][0], 1.0 / 0.04, 1e-12);
  EXPECT_NEAR(a.per_axis[1][0], -1.0 / 0.09, 1e-12);
  EXPECT_LT(is_isothermic(f, a).max_defect, 1e-10);
}

TEST(Isothermic, PerturbationBreaksItDeterministically) {
  EdgeWeights a;
  const QuadMap f = planar_grid(6, 6, 0.1, 0.1, &a);
  const QuadMap g1 = perturbed(f, 1e-2, 5), g2 = perturbed(f, 1e-2, 5), g3 = perturbed(f, 1e-2, 6);
  EXPECT_EQ(g1.points, g2.points);
  EXPECT_NE(g1.points, g3.points);
  const IsothermicReport r = is_isothermic(g1, a);
  EXPECT_FALSE(r.isothermic);
  EXPECT_GT(r.max_defect, 1e-5);
}

TEST(EdgeWeights, OppositeEdgesMustAgree) {
  const std::array<int, 3> ext{2, 2, 1};
  std::array<std::vector<double>, 3> edges;
  edges[0] = {1.0, 2.0};  // the two axis-0 edges of the single face
  edges[1] = {-1.0, -1.0};
  EXPECT_THROW(EdgeWeights::from_edges(ext, edges), DataError);
  edges[0] = {1.0, 1.0};
  EXPECT_NO_THROW(EdgeWeights::from_edges(ext, edges));
}

TEST(Connection, IdentityAtZero) {
  EdgeWeights a;
  const QuadMap f = cylinder_grid(5, 5, 0.2, 0.2, &a);
  const DiscreteConnection c = connection(f, a, 0.0);
  for (int axis = 0; axis < 2; ++axis)
    for (const Mat5& m : c.forward[axis]) EXPECT_LT((m - Mat5::Identity()).norm(), 1e-14);
}

TEST(Connection, FlatOnlyForIsothermicWeights) {
  EdgeWeights a;
  const QuadMap f = cylinder_grid(6, 6, 0.2, 0.2, &a);
  for (double t : {-2.0, 0.37, 7.0}) EXPECT_LT(flatness(connection(f, a, t)).max_defect, 1e-9) << t;
  EXPECT_GT(flatness(connection(perturbed(f, 1e-2, 1), a, 0.37)).max_defect, 1e-6);
}

TEST(Connection, PoleWhereParameterMatchesWeight) {
  EdgeWeights a;
  const QuadMap f = planar_grid(3, 3, 1.0, 1.0, &a);
  EXPECT_THROW(connection(f, a, 1.0), PoleError);
}

TEST(Trivialize, IndependentOfSweepOrder) {
  EdgeWeights a;
  const QuadMap f = planar_grid(5, 6, 0.2, 0.25, &a);
  const DiscreteConnection c = connection(f, a, 3.0);
  const DiscreteGauge g0 = trivialize(c, LatticeOrder::AxisZeroFirst);
  const DiscreteGauge g1 = trivialize(c, LatticeOrder::AxisOneFirst);
  for (std::size_t v = 0; v < g0.gauge.size(); ++v)
    EXPECT_LT((g0.gauge[v] - g1.gauge[v]).norm() / g0.gauge[v].norm(), 1e-10);
  EXPECT_LT(g0.residual, 1e-9);
  EXPECT_THROW(trivialize(connection(perturbed(f, 1e-2, 2), a, 3.0)), NotFlatError);
}

TEST(Darboux, GaugeIntertwinesTheConnections) {
  // Gamma^{fhat}_f(1 - t/ahat) maps the family of f to the family of fhat
  EdgeWeights a;
  const QuadMap f = planar_grid(4, 4, 0.2, 0.3, &a);
  const double ahat = 10.0;
  const DiscreteDarbouxResult d = darboux(f, a, ahat, kSeed);
  for (double t : {0.7, -4.0}) {
    const DiscreteConnection c = connection(f, a, t), ch = connection(d.fhat, a, t);
    for (int axis = 0; axis < 2; ++axis)
      for (std::size_t v = 0; v < f.size(); ++v) {
        const std::size_t w = f.neighbour(v, axis);
        if (w == static_cast<std::size_t>(-1)) continue;
        const Mat5 gv = gamma_matrix<double, 5>(d.fhat[v], f[v], 1 - t / ahat);
        const Mat5 gw = gamma_matrix<double, 5>(d.fhat[w], f[w], 1 - t / ahat);
        EXPECT_LT((gw * c.along(axis, v) - ch.along(axis, v) * gv).norm(), 1e-10);
      }
  }
}

TEST(Darboux, SingleFaceIsABianchiQuadrilateral) {
  EdgeWeights a;
  const QuadMap f = planar_grid(2, 2, 1.0, 1.0, &a);
  const DiscreteDarbouxResult d = darboux(f, a, 10.0, kSeed);
  EXPECT_LT(d.cross_ratio_spread, 1e-12);
  EXPECT_TRUE(d.singular.empty());
  // the two vertical faces over the single face, plus the face itself, form an isothermic cube
  const TripleSystem ts = triple_system(f, a, {10.0}, {kSeed});
  EXPECT_EQ(ts.map.extents[2], 2);
  EXPECT_LT(ts.level_defect, 1e-12);
}

TEST(Darboux, InvalidArguments) {
  EdgeWeights a;
  const QuadMap f = planar_grid(3, 3, 0.5, 0.5, &a);
  EXPECT_THROW(darboux(f, a, 0.0, kSeed), ParameterError);
  EXPECT_THROW(darboux(f, a, 10.0, Vec5(1, 0, 0, 0, 0)), ParameterError);
  EXPECT_THROW(darboux(f, a, 10.0, f[0]), ParameterError);
  EXPECT_THROW(darboux(perturbed(f, 1e-2, 3), a, 10.0, kSeed), NotFlatError);
}

TEST(TTransform, WeightsShiftBySAndOnlyShiftedWeightsWork) {
  EdgeWeights a;
  const QuadMap f = planar_grid(4, 4, 0.1, 0.1, &a);
  const double s = 0.37;
  const DiscreteTTransform t = t_transform(f, a, s);
  EXPECT_NEAR(t.weights.per_axis[0][1], a.per_axis[0][1] - s, 1e-12);
  EXPECT_LT(is_isothermic(t.map, t.weights, 1e300).max_defect, 1e-8);
  EXPECT_GT(is_isothermic(t.map, a, 1e300).max_defect, 1e-6);
}

TEST(TTransform, GroupProperty) {
  EdgeWeights a;
  const QuadMap f = planar_grid(4, 4, 0.1, 0.1, &a);
  const DiscreteTTransform ts = t_transform(f, a, 0.37);
  const DiscreteTTransform tr = t_transform(ts.map, ts.weights, -0.2);
  const DiscreteTTransform direct = t_transform(f, a, 0.17);
  for (std::size_t v = 0; v < f.size(); ++v) EXPECT_LT((projective_distance<double, 5>(tr.map[v], direct.map[v])), 1e-9);
}
