#pragma once

#include <cmath>
#include <random>

#include "bssn/pde_solvers.hpp"
#include "bssn/problem.hpp"

namespace bssn::testing {

/// a(x, y) = y - r, L = 0.5 y^2: constants solve the state equation.
inline ProblemSpec affine_instance(double r = 1.0) {
  ProblemSpec s;
  s.a = [r](const Point&, double y) { return y - r; };
  s.da_dy = [](const Point&, double) { return 1.0; };
  s.d2a_dy2 = [](const Point&, double) { return 0.0; };
  s.L = [](const Point&, double y) { return 0.5 * y * y; };
  s.dL_dy = [](const Point&, double y) { return y; };
  s.d2L_dy2 = [](const Point&, double) { return 1.0; };
  s.g = [](const Point&) { return 0.0; };
  s.bounds = {-0.5, 0.5};
  s.nu = 0.1;
  s.a0 = 1.0;
  return s;
}

/// Nodal field with independent entries uniform in [lo, hi).
inline NodalField random_field(Eigen::Index n, std::mt19937_64& rng, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  NodalField f(n);
  for (Eigen::Index i = 0; i < n; ++i) f[i] = dist(rng);
  return f;
}

/// Smooth field sum c_kl cos(k pi x1) cos(l pi x2), k, l <= 2.
inline NodalField smooth_field(const TriMesh& mesh, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  double c[3][3];
  for (auto& row : c) {
    for (double& v : row) v = dist(rng);
  }
  return sample_nodal(mesh, [&c](const Point& p) {
    double s = 0.0;
    for (int k = 0; k < 3; ++k) {
      for (int l = 0; l < 3; ++l) s += c[k][l] * std::cos(k * M_PI * p.x1) * std::cos(l * M_PI * p.x2);
    }
    return s;
  });
}

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

}  // namespace bssn::testing
