#include <gtest/gtest.h>

#include <random>

#include "latembed/error.hpp"
#include "latembed/lattice.hpp"
#include "test_support.hpp"

using namespace latembed;
using namespace latembed::testing;

namespace {

LatticeSpec cube(double lo, double hi, double h, int n = 3) {
  LatticeSpec l;
  l.lower = Vec::Constant(n, lo);
  l.upper = Vec::Constant(n, hi);
  l.spacing = h;
  return l;
}

EmbeddingMap map_of(const LatticeSpec& lattice, const std::function<Vec(const Vec&)>& zeta) {
  EmbeddingMap m;
  for (const Vec& q : generate_lattice(lattice)) {
    EmbeddingEntry e;
    e.q = q;
    e.zeta = zeta(q);
    m.entries.push_back(e);
  }
  return m;
}

}  // namespace

TEST(Lattice, CountsAndOrder) {
  const LatticeSpec l = cube(-1.0, 1.0, 0.5);
  EXPECT_EQ(l.counts(), (std::vector<int>{5, 5, 5}));
  EXPECT_EQ(l.size(), 125u);
  const auto pts = generate_lattice(l);
  ASSERT_EQ(pts.size(), 125u);
  EXPECT_EQ(pts[0], vec3(-1.0, -1.0, -1.0));
  EXPECT_EQ(pts[1], vec3(-1.0, -1.0, -0.5));
  EXPECT_EQ(pts[5], vec3(-1.0, -0.5, -1.0));
  EXPECT_EQ(pts[124], vec3(1.0, 1.0, 1.0));
}

TEST(Lattice, SpacingThatDoesNotDivideTheBox) {
  const LatticeSpec l = cube(0.0, 1.0, 0.3, 1);
  EXPECT_EQ(l.counts(), std::vector<int>{4});
  const LatticeSpec tenth = cube(-0.2, 0.2, 0.1, 1);
  EXPECT_EQ(tenth.counts(), std::vector<int>{5});
}

TEST(Lattice, InvertedBoxIsEmpty) {
  LatticeSpec l = cube(0.0, 1.0, 0.5);
  l.upper[1] = -1.0;
  try {
    l.counts();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyLattice);
  }
}

TEST(Extension, ExactAtNodesAndAffine) {
  const LatticeSpec l = cube(-1.0, 1.0, 0.5);
  Mat a(3, 3);
  a << 2, 0.1, 0, -0.3, 1, 0.4, 0, 0.2, 0.9;
  const EmbeddingMap m = map_of(l, [&](const Vec& q) { return Vec(a * q + vec3(1, 2, 3)); });
  for (const auto& e : m.entries) EXPECT_EQ(extend_map(m, l, e.q), e.zeta);
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 100; ++trial) {
    const Vec x = random_vec(rng, 3, -0.9, 0.9);
    EXPECT_LT((extend_map(m, l, x) - (a * x + vec3(1, 2, 3))).norm(), 1e-13);
    EXPECT_LT((jacobian_of_extension(m, l, x, 0.05) - a).norm(), 1e-10);
  }
}

TEST(Extension, MultilinearOnACell) {
  const LatticeSpec l = cube(0.0, 1.0, 1.0, 2);
  const EmbeddingMap m = map_of(l, [](const Vec& q) {
    Vec z(1);
    z << q[0] * q[1];
    return z;
  });
  EXPECT_NEAR(extend_map(m, l, vec2(0.3, 0.6))[0], 0.18, 1e-15);
}

TEST(Extension, OutsideTheHull) {
  const LatticeSpec l = cube(-1.0, 1.0, 0.5);
  const EmbeddingMap m = map_of(l, [](const Vec& q) { return q; });
  try {
    extend_map(m, l, vec3(0.0, 1.01, 0.0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::OutOfHull);
  }
  EXPECT_THROW(jacobian_of_extension(m, l, Vec::Zero(3), 0.2), Error);
}

TEST(Injectivity, IdentityIsInjectiveAndInverts) {
  const LatticeSpec l = cube(-1.0, 1.0, 0.5);
  const EmbeddingMap m = map_of(l, [](const Vec& q) { return Vec(2.0 * q); });
  const InjectivityReport r = check_injective_invert(m, default_injectivity_tolerance(l));
  ASSERT_TRUE(r.injective);
  EXPECT_DOUBLE_EQ(r.min_pair_distance, 1.0);
  EXPECT_EQ(r.inverse.size(), 125u);
  for (const auto& e : m.entries) EXPECT_EQ(*r.inverse.lookup(e.zeta), e.q);
  EXPECT_FALSE(r.inverse.lookup(vec3(0.1, 0, 0)).has_value());
}

TEST(Injectivity, CollapsedLayerCollides) {
  const LatticeSpec l = cube(-1.0, 1.0, 0.5);
  const EmbeddingMap m = map_of(l, [](const Vec& q) { return vec3(q[0], q[1], 0.0); });
  const InjectivityReport r = check_injective_invert(m, default_injectivity_tolerance(l));
  EXPECT_FALSE(r.injective);
  ASSERT_TRUE(r.colliding_pair.has_value());
  const auto [i, j] = *r.colliding_pair;
  EXPECT_EQ(m.entries[i].zeta, m.entries[j].zeta);
  EXPECT_EQ(r.inverse.size(), 0u);
}

TEST(LinearMap, ResidualDerivative) {
  const Vec q = vec3(0.5, -2.0, 3.0);
  EXPECT_EQ(residual_jacobian_derivative(q, 0, 1), 2.0);
  EXPECT_EQ(residual_jacobian_derivative(q, 2, 2), -3.0);
  EXPECT_THROW(residual_jacobian_derivative(q, 3, 0), Error);
}

TEST(LinearMap, IdentityMinimizesAlignment) {
  const ManifoldSpec plane = ManifoldSpec::plane();
  const std::vector<Vec> samples{vec3(1, 0, 0.1), vec3(0, 1, -0.05), vec3(0.3, 0.2, 0.08)};
  EXPECT_EQ(alignment_of_linear_map(Mat::Identity(3, 3), samples, plane, EnergyParams{}), 0.0);
  std::mt19937_64 rng(52);
  for (int trial = 0; trial < 20; ++trial) {
    const Mat e = Mat::NullaryExpr(3, 3, [&]() { return uniform(rng, -1, 1); });
    EXPECT_GT(alignment_of_linear_map(Mat::Identity(3, 3) + 0.01 * e, samples, plane, EnergyParams{}), 0.0);
  }
}
