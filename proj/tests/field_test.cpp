#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "latembed/error.hpp"
#include "latembed/field.hpp"
#include "test_support.hpp"

using namespace latembed;
using namespace latembed::testing;

TEST(Activation, ProfileShape) {
  EXPECT_EQ(activation_profile(0.0), 1.0);
  EXPECT_EQ(activation_profile(1.0), 1.0);
  EXPECT_EQ(activation_profile(2.0), 0.0);
  EXPECT_EQ(activation_profile(7.0), 0.0);
  EXPECT_NEAR(activation_profile(1.5), 0.5, 1e-15);
  EXPECT_NEAR(activation_profile(1.25) + activation_profile(1.75), 1.0, 1e-15);
}

TEST(Activation, ProfileIsMonotoneAndSmooth) {
  double prev = activation_profile(0.0);
  for (int i = 1; i <= 3000; ++i) {
    const double s = 3.0 * i / 3000.0;
    const double cur = activation_profile(s);
    EXPECT_LE(cur, prev);
    EXPECT_GE(cur, 0.0);
    prev = cur;
    if (s > 0.01 && s < 2.99) {
      const double fd = (activation_profile(s + 1e-6) - activation_profile(s - 1e-6)) / 2e-6;
      EXPECT_NEAR(activation_profile_derivative(s), fd, 1e-6);
    }
  }
  // first and second derivatives vanish at both ends of the decay band
  EXPECT_EQ(activation_profile_derivative(1.0), 0.0);
  EXPECT_EQ(activation_profile_derivative(2.0), 0.0);
  EXPECT_NEAR((activation_profile_derivative(1.0 + 1e-7) - activation_profile_derivative(1.0)) / 1e-7, 0.0, 1e-5);
  EXPECT_NEAR((activation_profile_derivative(2.0) - activation_profile_derivative(2.0 - 1e-7)) / 1e-7, 0.0, 1e-5);
}

TEST(Activation, FieldRejectsBadSteps) {
  const ManifoldSpec sphere = ManifoldSpec::sphere(1.0);
  EXPECT_THROW(ActivationField(sphere, 0.1, 0.01), Error);
  EXPECT_THROW(ActivationField(sphere, 0.0, 1e-4), Error);
  EXPECT_THROW(ActivationField(sphere, 0.1, 0.0), Error);
  EXPECT_NO_THROW(ActivationField(sphere, 0.1, 0.0099));
}

TEST(Activation, GradientIsRadialOnSphere) {
  const ManifoldSpec sphere = ManifoldSpec::sphere(1.0);
  const double delta = 0.1;
  const ActivationField field(sphere, delta, 1e-4);
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 30; ++trial) {
    const Vec dir = random_vec(rng, 3, -1.0, 1.0).normalized();
    const double s = uniform(rng, 1.05, 1.95);
    const Vec x = dir * (1.0 + s * delta);
    EXPECT_NEAR(field.distance(x), s * delta, 1e-14);
    const Vec oracle = activation_profile_derivative(s) / delta * dir;
    // second-order stencil with h = 1e-3 delta
    EXPECT_LT((activation_gradient(field, x) - oracle).norm(), 1e-4 * std::max(1.0, oracle.norm()));
  }
}

TEST(Activation, RegularizationVanishesOffTheBand) {
  const ManifoldSpec plane = ManifoldSpec::plane();
  const ActivationField field(plane, 0.1, 1e-4);
  for (double z : {0.0, 0.05, -0.08, 0.25, -1.0}) {
    const Vec x = vec3(0.5, -0.3, z);
    EXPECT_EQ(regularization_energy(field, x, 2.0), 0.0);
    EXPECT_EQ(regularization_gradient(field, x, 2.0).norm(), 0.0);
  }
}

TEST(Activation, RegularizationGradientMatchesEnergy) {
  const ManifoldSpec torus = ManifoldSpec::torus(2.0, 0.5);
  const ActivationField field(torus, 0.1, 1e-4);
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 20; ++trial) {
    const double phi = uniform(rng, 0.0, 2.0 * kPi);
    const double v = uniform(rng, 0.0, 2.0 * kPi);
    const double off = 0.1 * uniform(rng, 1.1, 1.9);
    const double rho = 2.0 + (0.5 + off) * std::cos(v);
    const Vec x = vec3(rho * std::cos(phi), rho * std::sin(phi), (0.5 + off) * std::sin(v));
    const Vec g = regularization_gradient(field, x, 0.5);
    const Vec fd = central_difference([&](const Vec& y) { return regularization_energy(field, y, 0.5); }, x, 1e-5);
    EXPECT_LT((g - fd).norm(), 1e-3 * fd.norm());
  }
}
