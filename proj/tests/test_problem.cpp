#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "bssn/derivatives.hpp"
#include "bssn/problem.hpp"

namespace bssn {
namespace {

bool mentions(const std::vector<std::string>& msgs, const std::string& text) {
  return std::any_of(msgs.begin(), msgs.end(), [&](const std::string& m) { return m.find(text) != std::string::npos; });
}

TEST(Benchmark, NonlinearityAtZeroState) {
  const ProblemSpec s = benchmark_instance();
  EXPECT_NEAR(s.a({0.25, 0.5}, 0.0), -100.0, 1e-12);
  EXPECT_NEAR(s.a({0.5, 0.5}, 0.0), 0.0, 1e-12);
}

TEST(Benchmark, DesiredState) {
  EXPECT_DOUBLE_EQ(benchmark_target({0.5, 0.5}), -4.0);
  EXPECT_DOUBLE_EQ(benchmark_target({0.0, 0.3}), 0.0);
}

TEST(Benchmark, Parameters) {
  const ProblemSpec s = benchmark_instance();
  EXPECT_DOUBLE_EQ(s.nu, 0.05);
  EXPECT_DOUBLE_EQ(s.bounds.alpha, -1.0);
  EXPECT_DOUBLE_EQ(s.bounds.beta, 1.0);
  EXPECT_DOUBLE_EQ(s.a0, 2.0);
  EXPECT_DOUBLE_EQ(s.g({0.0, 0.4}), 0.0);
  EXPECT_TRUE(s.diffusion.isIdentity());
}

TEST(Benchmark, DerivativesInClosedForm) {
  const ProblemSpec s = benchmark_instance();
  const Point x{0.3, 0.7};
  for (double y = -3.0; y <= 3.0; y += 0.25) {
    EXPECT_NEAR(s.da_dy(x, y), 4.0 * y * y * std::abs(y) + 2.0, 1e-12);
    EXPECT_GE(s.da_dy(x, y), 2.0);
    EXPECT_NEAR(s.d2a_dy2(x, y), 12.0 * y * std::abs(y), 1e-12);
    EXPECT_NEAR(s.L(x, y), 0.5 * std::pow(y - benchmark_target(x), 2), 1e-12);
    EXPECT_NEAR(s.dL_dy(x, y), y - benchmark_target(x), 1e-12);
    EXPECT_DOUBLE_EQ(s.d2L_dy2(x, y), 1.0);
  }
}

TEST(Benchmark, SecondDerivativeIsContinuousAtZero) {
  const ProblemSpec s = benchmark_instance();
  EXPECT_NEAR(s.d2a_dy2({0.5, 0.5}, 1e-8), 0.0, 1e-14);
  EXPECT_NEAR(s.d2a_dy2({0.5, 0.5}, -1e-8), 0.0, 1e-14);
}

TEST(Benchmark, SlopeFiniteDifferenceIsSecondOrder) {
  const ProblemSpec s = benchmark_instance();
  const Point x{0.2, 0.9};
  for (double y : {-1.7, -0.3, 0.6, 2.2}) {
    std::vector<double> steps{1e-1, 5e-2, 2.5e-2, 1.25e-2};
    std::vector<double> errors;
    for (double t : steps) {
      errors.push_back(std::abs((s.a(x, y + t) - s.a(x, y - t)) / (2 * t) - s.da_dy(x, y)));
    }
    EXPECT_GE(observed_order(steps, errors), 1.9) << "y = " << y;
  }
}

TEST(Benchmark, LinearTrackingForm) {
  const ProblemSpec s = benchmark_instance(TrackingForm::Linear);
  const Point x{0.5, 0.5};
  EXPECT_DOUBLE_EQ(s.L(x, 1.0), 0.5 * (1.0 + 4.0));
  EXPECT_DOUBLE_EQ(s.dL_dy(x, 1.0), 0.5);
  EXPECT_DOUBLE_EQ(s.d2L_dy2(x, 1.0), 0.0);
  EXPECT_TRUE(validate(s).empty());
}

TEST(Validate, BenchmarkPasses) { EXPECT_TRUE(validate(benchmark_instance()).empty()); }

TEST(Validate, NonPositiveNu) {
  ProblemSpec s = benchmark_instance();
  s.nu = 0.0;
  EXPECT_TRUE(mentions(validate(s), "nu must be positive"));
  s.nu = -1.0;
  EXPECT_TRUE(mentions(validate(s), "nu must be positive"));
}

TEST(Validate, AlphaBelowMinusA0) {
  ProblemSpec s = benchmark_instance();
  s.bounds.alpha = -3.0;
  EXPECT_TRUE(mentions(validate(s), "alpha must exceed -a0"));
}

TEST(Validate, EmptyControlInterval) {
  ProblemSpec s = benchmark_instance();
  s.bounds.alpha = 0.5;
  s.bounds.beta = 0.5;
  EXPECT_TRUE(mentions(validate(s), "alpha must be less than beta"));
}

TEST(Validate, ReportsEveryViolation) {
  ProblemSpec s = benchmark_instance();
  s.nu = 0.0;
  s.bounds.alpha = -3.0;
  s.diffusion << 1.0, 2.0, 2.0, 1.0;
  const auto msgs = validate(s);
  EXPECT_TRUE(mentions(msgs, "nu"));
  EXPECT_TRUE(mentions(msgs, "alpha"));
  EXPECT_TRUE(mentions(msgs, "positive definite"));
}

TEST(Validate, MissingFunctions) {
  ProblemSpec s = benchmark_instance();
  s.d2L_dy2 = nullptr;
  EXPECT_TRUE(mentions(validate(s), "must all be set"));
}

TEST(Validate, SlopeBelowA0) {
  ProblemSpec s = benchmark_instance();
  s.a0 = 2.5;
  s.bounds.alpha = -1.0;
  EXPECT_TRUE(mentions(validate(s), "below a0"));
}

TEST(Validate, InconsistentDerivatives) {
  ProblemSpec s = benchmark_instance();
  s.da_dy = [](const Point&, double y) { return 4.0 * y * y * std::abs(y) + 2.5; };
  EXPECT_TRUE(mentions(validate(s), "da_dy inconsistent with a"));

  s = benchmark_instance();
  s.d2L_dy2 = [](const Point&, double) { return 2.0; };
  EXPECT_TRUE(mentions(validate(s), "d2L_dy2 inconsistent"));
}

TEST(ControlBounds, Clamp) {
  const ControlBounds b{-1.0, 1.0};
  EXPECT_EQ(b.clamp(-3.0), -1.0);
  EXPECT_EQ(b.clamp(0.25), 0.25);
  EXPECT_EQ(b.clamp(7.0), 1.0);
  EXPECT_TRUE(b.upper_finite());
  EXPECT_FALSE(ControlBounds{}.upper_finite());
  EXPECT_EQ(ControlBounds{}.clamp(1e300), 1e300);
}

}  // namespace
}  // namespace bssn
