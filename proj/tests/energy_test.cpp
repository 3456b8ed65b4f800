#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "latembed/energy.hpp"
#include "latembed/error.hpp"
#include "latembed/field.hpp"
#include "test_support.hpp"

using namespace latembed;
using namespace latembed::testing;

namespace {

EnergyParams full_params() {
  EnergyParams p;
  p.alpha = 1.3;
  p.beta = 0.7;
  p.gamma = 0.2;
  p.lambda = 0.005;
  p.quadrature.resolution = 16;
  return p;
}

}  // namespace

TEST(Energy, AlignmentSplitsTangentialAndNormal) {
  const ManifoldSpec plane = ManifoldSpec::plane();
  const TangentFrame f = tangent_frame(plane, vec2(0.0, 0.0));
  EnergyParams p;
  p.alpha = 2.0;
  p.beta = 6.0;
  const Vec q = vec3(1.0, 2.0, 0.5);
  EXPECT_DOUBLE_EQ(alignment(p, f, Vec::Zero(3), q), 0.5 * 2.0 * 5.0 + 0.5 * 6.0 * 0.25);
  EXPECT_LT((alignment_gradient(p, f, Vec::Zero(3), q) - vec3(2.0, 4.0, 3.0)).norm(), 1e-15);
}

TEST(Energy, PlaneEnergyIsHalfBetaHeightSquared) {
  const ManifoldSpec plane = ManifoldSpec::plane();
  EnergyParams p;
  p.beta = 3.0;
  const EnergyBreakdown e = energy_breakdown(p, plane, vec3(0.4, -2.0, 0.3));
  EXPECT_NEAR(e.alignment, 0.5 * 3.0 * 0.09, 1e-15);
  EXPECT_EQ(e.curvature, 0.0);
  EXPECT_EQ(e.regularization, 0.0);
  EXPECT_EQ(e.total, e.alignment);
}

TEST(Energy, BreakdownSumsToTotal) {
  const EnergyParams p = full_params();
  const ManifoldSpec torus = ManifoldSpec::torus(2.0, 0.5);
  const Vec q = vec3(2.62, 0.1, 0.05);
  const EnergyBreakdown e = energy_breakdown(p, torus, q);
  EXPECT_NEAR(e.total, e.alignment + p.gamma * e.curvature + e.regularization, 1e-13);
  EXPECT_GT(e.regularization, 0.0);
  EXPECT_EQ(total_energy(p, torus, q), e.total);
}

TEST(Energy, GradientIsTheResidual) {
  const EnergyParams p = full_params();
  const ManifoldSpec sphere = ManifoldSpec::sphere(1.0);
  const Vec q = vec3(0.2, 0.7, 0.8);
  const Vec r = el_residual(p, sphere, q);
  const Vec g = total_gradient(p, sphere, q);
  EXPECT_EQ(r, g);
  const ResidualTerms t = el_residual_terms(p, sphere, q);
  EXPECT_LT((t.alignment + t.curvature + t.regularization - t.total).norm(), 1e-12);
  EXPECT_EQ(t.total, r);
}

TEST(Energy, GradientMatchesFiniteDifferences) {
  const EnergyParams p = full_params();
  std::mt19937_64 rng(41);
  const std::vector<std::pair<ManifoldSpec, std::function<Vec()>>> cases{
      {ManifoldSpec::plane(), [&]() -> Vec { return vec3(uniform(rng, -3, 3), uniform(rng, -3, 3), uniform(rng, -0.19, 0.19)); }},
      {ManifoldSpec::sphere(1.0),
       [&]() -> Vec { return random_vec(rng, 3, -1.0, 1.0).normalized() * uniform(rng, 0.81, 1.19); }},
      {ManifoldSpec::torus(2.0, 0.5),
       [&]() -> Vec {
         const double phi = uniform(rng, 0, 2 * kPi), v = uniform(rng, 0, 2 * kPi), r = uniform(rng, 0.31, 0.69);
         const double rho = 2.0 + r * std::cos(v);
         return vec3(rho * std::cos(phi), rho * std::sin(phi), r * std::sin(v));
       }},
  };
  for (const auto& [spec, sample] : cases) {
    for (int trial = 0; trial < 15; ++trial) {
      const Vec q = sample();
      const Vec g = total_gradient(p, spec, q);
      const Vec fd = central_difference([&](const Vec& x) { return total_energy(p, spec, x); }, q, 1e-5);
      EXPECT_LE((g - fd).cwiseAbs().maxCoeff(), std::max(1e-4, 1e-3 * fd.norm()));
    }
  }
}

TEST(Energy, EmbeddingResidualAddsTheFieldGradient) {
  EnergyParams p = full_params();
  const ManifoldSpec sphere = ManifoldSpec::sphere(1.0);
  const Vec q = vec3(0.0, 0.0, 1.15);
  EXPECT_EQ(embedding_pde_residual(p, sphere, q), el_residual(p, sphere, q));
  p.field.mu = 0.3;
  const ActivationField field(sphere, p.field.tube_radius, p.field.fd_step);
  const Vec expected = el_residual(p, sphere, q) + 0.3 * activation_gradient(field, q);
  EXPECT_LT((embedding_pde_residual(p, sphere, q) - expected).norm(), 1e-12);
}

TEST(Energy, ValidateRejectsBadWeights) {
  EnergyParams p;
  p.alpha = -1.0;
  EXPECT_THROW(p.validate(), Error);
  p = EnergyParams{};
  p.beta = 0.0;
  EXPECT_THROW(p.validate(), Error);
  p = EnergyParams{};
  p.gamma = -0.1;
  EXPECT_THROW(p.validate(), Error);
  p = EnergyParams{};
  p.field.fd_step = 0.05;
  EXPECT_THROW(p.validate(), Error);
  EXPECT_NO_THROW(EnergyParams{}.validate());
}

TEST(ReducedEquation, EqualComponentsGiveOneLambda) {
  const Vec q = Vec::Constant(4, -1.25);
  const LambdaSolution s = solve_lambda_reduced(q, 0.5);
  ASSERT_TRUE(s.consistent);
  ASSERT_TRUE(s.lambda.has_value());
  EXPECT_DOUBLE_EQ(*s.lambda, -2.5);
  EXPECT_LE(reduced_residual(q, *s.lambda, 0.5).norm(), 1e-15);
}

TEST(ReducedEquation, UnequalComponentsAreInconsistent) {
  const LambdaSolution s = solve_lambda_reduced(vec3(1.0, 1.0, 1.1), 2.0);
  EXPECT_FALSE(s.consistent);
  EXPECT_FALSE(s.lambda.has_value());
  EXPECT_DOUBLE_EQ(s.per_component[2], 0.55);
}

TEST(ReducedEquation, FlatCases) {
  try {
    solve_lambda_reduced(Vec::Zero(3), 0.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Indeterminate);
  }
  try {
    solve_lambda_reduced(vec3(0.0, 1.0, 0.0), 0.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NoSolution);
  }
}
