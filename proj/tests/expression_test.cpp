#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "latembed/error.hpp"
#include "latembed/expression.hpp"

using latembed::Error;
using latembed::ErrorCode;
using latembed::Expression;

namespace {

double eval(const std::string& text, std::vector<double> u = {0.0}) {
  return Expression::parse(text, static_cast<int>(u.size())).eval(u);
}

}  // namespace

TEST(Expression, Precedence) {
  EXPECT_DOUBLE_EQ(eval("1 + 2 * 3"), 7.0);
  EXPECT_DOUBLE_EQ(eval("(1 + 2) * 3"), 9.0);
  EXPECT_DOUBLE_EQ(eval("2 ^ 3 ^ 2"), 512.0);
  EXPECT_DOUBLE_EQ(eval("-2 ^ 2"), -4.0);
  EXPECT_DOUBLE_EQ(eval("8 / 4 / 2"), 1.0);
  EXPECT_DOUBLE_EQ(eval("10 - 4 - 3"), 3.0);
  EXPECT_DOUBLE_EQ(eval("+-3"), -3.0);
  EXPECT_DOUBLE_EQ(eval("1.5e2"), 150.0);
}

TEST(Expression, FunctionsAndVariables) {
  EXPECT_NEAR(eval("cos(pi)"), -1.0, 1e-15);
  EXPECT_NEAR(eval("sin(u1) * exp(u2)", {0.3, -0.2}), std::sin(0.3) * std::exp(-0.2), 1e-15);
  EXPECT_DOUBLE_EQ(eval("u1 ^ 2 + u2 ^ 2", {3.0, 4.0}), 25.0);
}

TEST(Expression, DualGradientMatchesFiniteDifferences) {
  const Expression e = Expression::parse("(2 + 0.5 * cos(u2)) * sin(u1) ^ 2 / exp(u1 * u2) - u2 ^ 3", 2);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> dist(-1.5, 1.5);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> u{dist(rng), dist(rng)};
    const auto d = e.eval_dual(u);
    EXPECT_DOUBLE_EQ(d.value, e.eval(u));
    for (int k = 0; k < 2; ++k) {
      auto up = u, dn = u;
      up[k] += 1e-6;
      dn[k] -= 1e-6;
      const double fd = (e.eval(up) - e.eval(dn)) / 2e-6;
      EXPECT_NEAR(d.grad[k], fd, 1e-6 * std::max(1.0, std::abs(fd)));
    }
  }
}

TEST(Expression, DualOfPowerWithVariableExponent) {
  const Expression e = Expression::parse("u1 ^ u2", 2);
  const auto d = e.eval_dual({2.0, 3.0});
  EXPECT_DOUBLE_EQ(d.value, 8.0);
  EXPECT_NEAR(d.grad[0], 12.0, 1e-12);
  EXPECT_NEAR(d.grad[1], 8.0 * std::log(2.0), 1e-12);
}

TEST(Expression, NeedsAtLeastOneVariable) { EXPECT_THROW(Expression::parse("1", 0), Error); }

TEST(Expression, RejectsMalformedInput) {
  for (const char* bad : {"u1 +", "(u1", "u1)", "sin u1", "u3", "foo(1)", "1 2", "", "u0"}) {
    try {
      Expression::parse(bad, 2);
      ADD_FAILURE() << "accepted '" << bad << "'";
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::ParseError) << bad;
    }
  }
}
