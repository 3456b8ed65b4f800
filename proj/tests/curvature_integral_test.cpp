#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "latembed/curvature_integral.hpp"
#include "latembed/error.hpp"
#include "test_support.hpp"

using namespace latembed;
using namespace latembed::testing;

namespace {

// Unit 3-sphere in R^4 through hyperspherical angles.
ManifoldSpec three_sphere() {
  Vec lo(3), hi(3);
  lo << 0.3, 0.3, 0.0;
  hi << kPi - 0.3, kPi - 0.3, 2.0 * kPi;
  return ManifoldSpec::parametric({"cos(u1)", "sin(u1) * cos(u2)", "sin(u1) * sin(u2) * cos(u3)",
                                   "sin(u1) * sin(u2) * sin(u3)"},
                                  lo, hi, {false, false, true});
}

}  // namespace

TEST(Quadrature, SphereMeasure) {
  EXPECT_NEAR(sphere_measure(2), 2.0 * kPi, 1e-14);
  EXPECT_NEAR(sphere_measure(3), 4.0 * kPi, 1e-14);
  EXPECT_NEAR(sphere_measure(4), 2.0 * kPi * kPi, 1e-13);
}

TEST(Quadrature, CircleRuleIsUniform) {
  const QuadratureRule rule = build_quadrature(2, 16, 99);
  ASSERT_EQ(rule.nodes.size(), 16u);
  double total = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    EXPECT_NEAR(rule.nodes[i].norm(), 1.0, 1e-15);
    EXPECT_NEAR(std::atan2(rule.nodes[i][1], rule.nodes[i][0]),
                std::remainder(2.0 * kPi * static_cast<double>(i) / 16.0, 2.0 * kPi), 1e-14);
    total += rule.weights[i];
  }
  EXPECT_NEAR(total, 2.0 * kPi, 1e-13);
}

TEST(Quadrature, SampledRuleIsSeededAndNormalized) {
  const QuadratureRule a = build_quadrature(3, 32, 5);
  const QuadratureRule b = build_quadrature(3, 32, 5);
  const QuadratureRule c = build_quadrature(3, 32, 6);
  double total = 0.0;
  for (std::size_t i = 0; i < a.nodes.size(); ++i) {
    EXPECT_NEAR(a.nodes[i].norm(), 1.0, 1e-15);
    EXPECT_EQ(a.nodes[i], b.nodes[i]);
    total += a.weights[i];
  }
  EXPECT_NEAR(total, 4.0 * kPi, 1e-13);
  EXPECT_NE(a.nodes[0], c.nodes[0]);
}

TEST(Quadrature, SampledNodesAreRoughlyIsotropic) {
  const QuadratureRule rule = build_quadrature(3, 4000, 1);
  Vec mean = Vec::Zero(3);
  for (const Vec& n : rule.nodes) mean += n;
  mean /= 4000.0;
  EXPECT_LT(mean.norm(), 0.06);
}

TEST(Quadrature, RejectsTinyResolution) {
  try {
    build_quadrature(2, 3, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::BadResolution);
  }
}

TEST(CurvatureIntegral, ConstantCurvatureSurfaces) {
  const QuadratureRule rule = build_quadrature(2, 64, 0);
  for (double r : {0.5, 1.0, 3.0}) {
    const CurvatureIntegral c = curvature_double_integral(ManifoldSpec::sphere(r), vec2(1.0, 2.0), rule);
    EXPECT_NEAR(c.value, 4.0 * kPi * kPi / (r * r), 1e-10);
    EXPECT_NEAR(c.rescaled_mass, 4.0 * kPi * kPi, 1e-10);
    EXPECT_GT(c.rejected_pairs, 0u);  // the v = +-w pairs
    EXPECT_EQ(c.retained_pairs + c.rejected_pairs, 64u * 64u);
  }
  EXPECT_EQ(curvature_double_integral(ManifoldSpec::plane(), vec2(0.0, 0.0), rule).value, 0.0);
}

TEST(CurvatureIntegral, FiniteDifferencePathAgrees) {
  const QuadratureRule rule = build_quadrature(2, 32, 0);
  const ManifoldSpec torus = ManifoldSpec::torus(2.0, 0.5);
  const Vec u = vec2(0.3, 0.9);
  const double analytic = curvature_double_integral(torus, u, rule).value;
  const double fd = curvature_double_integral(torus, u, rule, {CurvatureMethod::FiniteDifference}).value;
  EXPECT_NEAR(fd, analytic, 1e-3 * 4.0 * kPi * kPi);
  EXPECT_NEAR(analytic, 4.0 * kPi * kPi * torus.gaussian_curvature(u), 1e-9);
}

TEST(CurvatureIntegral, ThreeSphereIntegral) {
  const QuadratureRule rule = build_quadrature(3, 48, 3);
  const ManifoldSpec s3 = three_sphere();
  const CurvatureIntegral c = curvature_double_integral(s3, vec3(1.2, 1.4, 0.5), rule);
  const double mass = sphere_measure(3) * sphere_measure(3);
  EXPECT_NEAR(c.value, mass, 1e-3 * mass);
  EXPECT_NEAR(c.rescaled_mass, mass, 1e-9 * mass);
}

TEST(CurvatureIntegral, AllPairsDegenerateIsReported) {
  const QuadratureRule rule = build_quadrature(2, 8, 0);
  CurvatureOptions opts;
  opts.eps_parallel = 1e9;
  try {
    curvature_double_integral(ManifoldSpec::sphere(1.0), vec2(1.0, 1.0), rule, opts);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::AllPairsDegenerate);
  }
}

TEST(CurvatureIntegral, GradientOnTorusMatchesClosedForm) {
  const double big_r = 2.0, small_r = 0.5;
  const ManifoldSpec torus = ManifoldSpec::torus(big_r, small_r);
  const QuadratureRule rule = build_quadrature(2, 16, 0);
  // Closed form of the pulled-back integral: (2 pi)^2 K(v(q)).
  auto pulled_back = [&](const Vec& q) {
    const double rho = std::hypot(q[0], q[1]);
    const double v = std::atan2(q[2], rho - big_r);
    return 4.0 * kPi * kPi * std::cos(v) / (small_r * (big_r + small_r * std::cos(v)));
  };
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const Vec q = vec3(uniform(rng, 1.7, 2.3), uniform(rng, -0.5, 0.5), uniform(rng, -0.3, 0.3));
    EXPECT_NEAR(curvature_integral_at(torus, q, rule), pulled_back(q), 1e-9);
    const Vec g = curvature_integral_gradient(torus, q, rule, 1e-4);
    const Vec oracle = central_difference(pulled_back, q, 1e-6);
    EXPECT_LT((g - oracle).norm(), 1e-5 * std::max(1.0, oracle.norm()));
  }
}

TEST(CurvatureIntegral, GradientVanishesForRoundSphere) {
  const QuadratureRule rule = build_quadrature(2, 16, 0);
  const Vec g = curvature_integral_gradient(ManifoldSpec::sphere(1.0), vec3(0.3, 0.8, 0.6), rule, 1e-4);
  EXPECT_LT(g.norm(), 1e-8);
}
