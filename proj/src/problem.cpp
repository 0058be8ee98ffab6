#include "bssn/problem.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

namespace bssn {

double benchmark_target(const Point& x) {
  return -64.0 * x.x1 * (1.0 - x.x1) * x.x2 * (1.0 - x.x2);
}

namespace {

double benchmark_forcing(const Point& x) {
  using std::numbers::pi;
  return 100.0 * std::sin(2.0 * pi * x.x1) * std::sin(pi * x.x2);
}

WideReal wide_abs(WideReal y) { return y < 0 ? -y : y; }

}  // namespace

ProblemSpec benchmark_instance(TrackingForm tracking) {
  ProblemSpec spec;
  spec.a = [](const Point& x, double y) { return y * y * y * std::abs(y) + 2.0 * y - benchmark_forcing(x); };
  spec.da_dy = [](const Point&, double y) { return 4.0 * y * y * std::abs(y) + 2.0; };
  spec.d2a_dy2 = [](const Point&, double y) { return 12.0 * y * std::abs(y); };

  if (tracking == TrackingForm::Quadratic) {
    spec.L = [](const Point& x, double y) {
      const double d = y - benchmark_target(x);
      return 0.5 * d * d;
    };
    spec.dL_dy = [](const Point& x, double y) { return y - benchmark_target(x); };
    spec.d2L_dy2 = [](const Point&, double) { return 1.0; };
  } else {
    spec.L = [](const Point& x, double y) { return 0.5 * (y - benchmark_target(x)); };
    spec.dL_dy = [](const Point&, double) { return 0.5; };
    spec.d2L_dy2 = [](const Point&, double) { return 0.0; };
  }

  WideForms wide;
  wide.a = [](const Point& x, WideReal y) {
    return y * y * y * wide_abs(y) + 2 * y - static_cast<WideReal>(benchmark_forcing(x));
  };
  wide.da_dy = [](const Point&, WideReal y) { return 4 * y * y * wide_abs(y) + 2; };
  if (tracking == TrackingForm::Quadratic) {
    wide.L = [](const Point& x, WideReal y) {
      const WideReal d = y - static_cast<WideReal>(benchmark_target(x));
      return d * d / 2;
    };
    wide.dL_dy = [](const Point& x, WideReal y) { return y - static_cast<WideReal>(benchmark_target(x)); };
  } else {
    wide.L = [](const Point& x, WideReal y) { return (y - static_cast<WideReal>(benchmark_target(x))) / 2; };
    wide.dL_dy = [](const Point&, WideReal) { return static_cast<WideReal>(0.5); };
  }
  spec.wide = std::move(wide);

  spec.g = [](const Point&) { return 0.0; };
  spec.bounds = {-1.0, 1.0};
  spec.nu = 0.05;
  spec.a0 = 2.0;
  spec.diffusion = Eigen::Matrix2d::Identity();
  return spec;
}

namespace {

std::string describe(const char* fmt, double x1, double x2, double y, double got, double want) {
  char buf[256];
  std::snprintf(buf, sizeof buf, fmt, x1, x2, y, got, want);
  return buf;
}

// Central difference of f against its claimed derivative df at one sample.
bool derivative_consistent(const PointwiseFn& f, const PointwiseFn& df, const Point& x, double y,
                           double& fd, double& exact) {
  constexpr double t = 1e-4;
  fd = (f(x, y + t) - f(x, y - t)) / (2.0 * t);
  exact = df(x, y);
  if (!std::isfinite(fd) || !std::isfinite(exact)) return false;
  return std::abs(fd - exact) <= 1e-5 * (1.0 + std::abs(exact));
}

}  // namespace

std::vector<std::string> validate(const ProblemSpec& spec) {
  std::vector<std::string> out;

  if (!(spec.nu > 0.0)) out.emplace_back("nu must be positive");
  if (!(spec.a0 >= 0.0)) out.emplace_back("a0 must be nonnegative");
  if (!(spec.bounds.alpha > -spec.a0)) out.emplace_back("alpha must exceed -a0");
  if (!std::isfinite(spec.bounds.alpha)) out.emplace_back("alpha must be finite");
  if (!(spec.bounds.alpha < spec.bounds.beta)) out.emplace_back("alpha must be less than beta");

  const Eigen::Matrix2d& d = spec.diffusion;
  if (d(0, 1) != d(1, 0)) out.emplace_back("diffusion matrix must be symmetric");
  if (!(d(0, 0) > 0.0) || !(d.determinant() > 0.0)) out.emplace_back("diffusion matrix must be positive definite");

  const bool have_all = spec.a && spec.da_dy && spec.d2a_dy2 && spec.L && spec.dL_dy && spec.d2L_dy2 && spec.g;
  if (!have_all) {
    out.emplace_back("problem functions a, da_dy, d2a_dy2, L, dL_dy, d2L_dy2 and g must all be set");
    return out;
  }

  // Sample grid: 5 x 5 points in the closed square, y in [-5, 5].
  bool monotone_ok = true;
  bool da_ok = true;
  bool d2a_ok = true;
  bool dl_ok = true;
  bool d2l_ok = true;
  for (int i = 0; i <= 4 && (monotone_ok || da_ok || d2a_ok || dl_ok || d2l_ok); ++i) {
    for (int j = 0; j <= 4; ++j) {
      const Point x{0.25 * i, 0.25 * j};
      for (int k = -10; k <= 10; ++k) {
        const double y = 0.5 * k;
        double fd = 0.0;
        double exact = 0.0;
        if (monotone_ok) {
          const double slope = spec.da_dy(x, y);
          if (!(slope >= spec.a0)) {
            monotone_ok = false;
            out.push_back(describe("da_dy(x=(%g,%g), y=%g) = %.6g is below a0 = %g", x.x1, x.x2, y, slope, spec.a0));
          }
        }
        if (da_ok && !derivative_consistent(spec.a, spec.da_dy, x, y, fd, exact)) {
          da_ok = false;
          out.push_back(describe("da_dy inconsistent with a at x=(%g,%g), y=%g: finite difference %.8g vs %.8g",
                                 x.x1, x.x2, y, fd, exact));
        }
        if (d2a_ok && !derivative_consistent(spec.da_dy, spec.d2a_dy2, x, y, fd, exact)) {
          d2a_ok = false;
          out.push_back(describe("d2a_dy2 inconsistent with da_dy at x=(%g,%g), y=%g: finite difference %.8g vs %.8g",
                                 x.x1, x.x2, y, fd, exact));
        }
        if (dl_ok && !derivative_consistent(spec.L, spec.dL_dy, x, y, fd, exact)) {
          dl_ok = false;
          out.push_back(describe("dL_dy inconsistent with L at x=(%g,%g), y=%g: finite difference %.8g vs %.8g",
                                 x.x1, x.x2, y, fd, exact));
        }
        if (d2l_ok && !derivative_consistent(spec.dL_dy, spec.d2L_dy2, x, y, fd, exact)) {
          d2l_ok = false;
          out.push_back(describe("d2L_dy2 inconsistent with dL_dy at x=(%g,%g), y=%g: finite difference %.8g vs %.8g",
                                 x.x1, x.x2, y, fd, exact));
        }
      }
    }
  }

  if (spec.wide) {
    const WideForms& w = *spec.wide;
    if (!w.a || !w.da_dy || !w.L || !w.dL_dy) {
      out.emplace_back("extended-precision forms a, da_dy, L and dL_dy must all be set");
      return out;
    }
    const std::pair<const char*, std::pair<const PointwiseFn*, const WidePointwiseFn*>> pairs[] = {
        {"a", {&spec.a, &w.a}}, {"da_dy", {&spec.da_dy, &w.da_dy}}, {"L", {&spec.L, &w.L}},
        {"dL_dy", {&spec.dL_dy, &w.dL_dy}}};
    for (const auto& [name, fns] : pairs) {
      bool agree = true;
      for (int i = 0; i <= 4 && agree; ++i) {
        for (int j = 0; j <= 4 && agree; ++j) {
          const Point x{0.25 * i, 0.25 * j};
          for (int k = -10; k <= 10 && agree; ++k) {
            const double y = 0.5 * k;
            const double want = (*fns.first)(x, y);
            const double got = static_cast<double>((*fns.second)(x, y));
            if (!(std::abs(got - want) <= 1e-12 * (1.0 + std::abs(want)))) {
              agree = false;
              out.push_back(std::string("extended-precision ") + name +
                            describe(" differs at x=(%g,%g), y=%g: %.17g vs %.17g", x.x1, x.x2, y, got, want));
            }
          }
        }
      }
    }
  }
  return out;
}

}  // namespace bssn
