#pragma once

#include <Eigen/Dense>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "bssn/mesh.hpp"

namespace bssn {

/// f(x, y) for the nonlinearity, the objective integrand and their y-derivatives.
using PointwiseFn = std::function<double(const Point&, double)>;
/// Boundary flux g(x) on the square boundary.
using BoundaryFn = std::function<double(const Point&)>;

/// Real type of the extended-precision evaluations used by the derivative checks.
#if defined(__SIZEOF_FLOAT128__)
using WideReal = __float128;
#else
using WideReal = long double;
#endif

using WidePointwiseFn = std::function<WideReal(const Point&, WideReal)>;

/// Extended-precision versions of a, da_dy, L and dL_dy.
///
/// They must describe the same discrete problem as the double forms: data
/// that depend on x only are computed in double and then widened, and only
/// the arithmetic in y is carried out in WideReal.
struct WideForms {
  WidePointwiseFn a;
  WidePointwiseFn da_dy;
  WidePointwiseFn L;
  WidePointwiseFn dL_dy;
};

struct ControlBounds {
  double alpha = -1.0;
  double beta = std::numeric_limits<double>::infinity();

  bool upper_finite() const noexcept { return beta < std::numeric_limits<double>::infinity(); }
  double clamp(double t) const noexcept { return t < alpha ? alpha : (t > beta ? beta : t); }
};

enum class TrackingForm { Quadratic, Linear };

/// Data of  min J(u) = int L(x, y_u) + nu/2 int u^2  over alpha <= u <= beta,
/// subject to  -div(D grad y) + a(x, y) + u y = 0,  D grad y . n = g.
struct ProblemSpec {
  PointwiseFn a;
  PointwiseFn da_dy;
  PointwiseFn d2a_dy2;
  PointwiseFn L;
  PointwiseFn dL_dy;
  PointwiseFn d2L_dy2;
  BoundaryFn g;
  ControlBounds bounds;
  double nu = 0.0;
  /// Lower bound on da_dy over the whole domain.
  double a0 = 0.0;
  Eigen::Matrix2d diffusion = Eigen::Matrix2d::Identity();
  /// Optional; enables the refined finite-difference gradient check.
  std::optional<WideForms> wide;
};

/// Desired state of the benchmark, -64 x1 (1 - x1) x2 (1 - x2).
double benchmark_target(const Point& x);

/// The reference instance on the unit square with A = -Laplace, g = 0,
/// a(x, y) = y^3 |y| + 2 y - 100 sin(2 pi x1) sin(pi x2), nu = 0.05, [alpha, beta] = [-1, 1],
/// L = 0.5 (y - y_d)^2 (or 0.5 (y - y_d) for TrackingForm::Linear), a0 = 2.
ProblemSpec benchmark_instance(TrackingForm tracking = TrackingForm::Quadratic);

/// Every violated assumption as a human-readable line; empty means ok.
std::vector<std::string> validate(const ProblemSpec& spec);

}  // namespace bssn
