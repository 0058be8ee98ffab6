#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "bssn/expression.hpp"

namespace bssn {
namespace {

double eval(const char* src, double x1 = 0.3, double x2 = 0.7, double y = -1.25) {
  return Expression::parse(src)(x1, x2, y);
}

std::size_t error_column(const char* src, Expression::Variables vars = Expression::Variables::SpaceAndState) {
  try {
    Expression::parse(src, vars);
  } catch (const ExpressionError& e) {
    return e.column();
  }
  return 0;
}

TEST(Expression, Literals) {
  EXPECT_DOUBLE_EQ(eval("42"), 42.0);
  EXPECT_DOUBLE_EQ(eval("2.5e-3"), 2.5e-3);
  EXPECT_DOUBLE_EQ(eval(".5"), 0.5);
  EXPECT_DOUBLE_EQ(eval("pi"), std::numbers::pi);
}

TEST(Expression, Variables) {
  EXPECT_DOUBLE_EQ(eval("x1"), 0.3);
  EXPECT_DOUBLE_EQ(eval("x2"), 0.7);
  EXPECT_DOUBLE_EQ(eval("y"), -1.25);
}

TEST(Expression, PrecedenceAndAssociativity) {
  EXPECT_DOUBLE_EQ(eval("1 + 2 * 3"), 7.0);
  EXPECT_DOUBLE_EQ(eval("(1 + 2) * 3"), 9.0);
  EXPECT_DOUBLE_EQ(eval("8 - 3 - 2"), 3.0);
  EXPECT_DOUBLE_EQ(eval("8 / 4 / 2"), 1.0);
  EXPECT_DOUBLE_EQ(eval("2 ^ 3 ^ 2"), 512.0);
  EXPECT_DOUBLE_EQ(eval("-2 ^ 2"), -4.0);
  EXPECT_DOUBLE_EQ(eval("2 ^ -1"), 0.5);
  EXPECT_DOUBLE_EQ(eval("--3"), 3.0);
  EXPECT_DOUBLE_EQ(eval("+3 - -3"), 6.0);
  EXPECT_DOUBLE_EQ(eval("2 * -x1"), -0.6);
}

TEST(Expression, Functions) {
  EXPECT_DOUBLE_EQ(eval("sin(pi / 2)"), 1.0);
  EXPECT_DOUBLE_EQ(eval("cos(0)"), 1.0);
  EXPECT_DOUBLE_EQ(eval("exp(1)"), std::exp(1.0));
  EXPECT_DOUBLE_EQ(eval("abs(y)"), 1.25);
  EXPECT_DOUBLE_EQ(eval("abs(-abs(-2))"), 2.0);
}

TEST(Expression, BenchmarkNonlinearity) {
  const Expression a = Expression::parse("y^3*abs(y) + 2*y - 100*sin(2*pi*x1)*sin(pi*x2)");
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> d(-2, 2);
  for (int k = 0; k < 50; ++k) {
    const double x1 = d(rng), x2 = d(rng), y = d(rng);
    const double expected = y * y * y * std::abs(y) + 2 * y -
                            100 * std::sin(2 * std::numbers::pi * x1) * std::sin(std::numbers::pi * x2);
    EXPECT_NEAR(a(x1, x2, y), expected, 1e-12 * std::max(1.0, std::abs(expected)));
  }
}

TEST(Expression, DeepNesting) {
  std::string src;
  for (int i = 0; i < 200; ++i) src += "(1+";
  src += "0";
  for (int i = 0; i < 200; ++i) src += ")";
  EXPECT_DOUBLE_EQ(Expression::parse(src)(0, 0), 200.0);
  std::string chain = "1";
  for (int i = 0; i < 100; ++i) chain = "1 + (" + chain + ")";
  EXPECT_DOUBLE_EQ(Expression::parse(chain)(0, 0), 101.0);
}

TEST(Expression, KeepsSource) { EXPECT_EQ(Expression::parse(" x1 + 1").source(), " x1 + 1"); }

TEST(Expression, ErrorsCarryColumns) {
  EXPECT_EQ(error_column(""), 1u);
  EXPECT_EQ(error_column("1 +"), 4u);
  EXPECT_EQ(error_column("1 + z"), 5u);
  EXPECT_EQ(error_column("(1 + 2"), 7u);
  EXPECT_EQ(error_column("sin 1"), 5u);
  EXPECT_EQ(error_column("tan(1)"), 1u);
  EXPECT_EQ(error_column("1 2"), 3u);
  EXPECT_EQ(error_column("2 $ 3"), 3u);
  EXPECT_EQ(error_column("x1 + y", Expression::Variables::Space), 6u);
}

TEST(Expression, ErrorMessages) {
  try {
    Expression::parse("foo + 1");
    FAIL();
  } catch (const ExpressionError& e) {
    EXPECT_NE(std::string(e.what()).find("unknown identifier 'foo'"), std::string::npos);
  }
}

}  // namespace
}  // namespace bssn
