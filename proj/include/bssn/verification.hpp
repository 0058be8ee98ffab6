#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bssn/config.hpp"
#include "bssn/pde_solvers.hpp"

namespace bssn {

/// `count` smooth directions sum_{k,l<=3} c_kl cos(k pi x1) cos(l pi x2) with
/// c_kl uniform in [-1, 1) from a seeded mt19937_64 (bit-exact across
/// standard libraries), scaled to unit max norm.
std::vector<NodalField> random_directions(const TriMesh& mesh, int count, std::uint64_t seed);

/// {1e-2, 1e-3, 1e-4, 1e-5} when the problem has extended-precision forms.
/// Otherwise {1e-1, 5e-2, 2.5e-2, 1.25e-2}: with J evaluated in double, the
/// rounding term eps |J| / t outgrows the truncation error below t ~ 1e-3.
std::vector<double> default_gradient_steps(const ProblemSpec& spec);

/// Finite-difference error sequence along one direction.
struct OrderCheck {
  int direction = 0;
  bool skipped = false;
  std::string note;
  /// Exact directional quantity from the adjoint / sensitivity formulas.
  double exact = 0.0;
  std::vector<double> steps;
  std::vector<double> errors;
  double order = 0.0;
};

struct SymmetryCheck {
  int first = 0;
  int second = 0;
  bool skipped = false;
  /// |<H v, w> - <H w, v>| / (||H v|| ||w||), lumped norms.
  double relative = 0.0;
};

struct DerivativeReport {
  std::vector<OrderCheck> gradient;
  std::vector<OrderCheck> hessian;
  std::vector<SymmetryCheck> hessian_symmetry;
  /// Same residual for the inactive-set operator at the base point's active sets.
  std::vector<SymmetryCheck> mj_symmetry;
  double min_order = 1.9;
  double symmetry_tol = 1e-10;
  /// The gradient check ran on extended-precision state and adjoint solves.
  bool refined_gradient = false;

  /// All orders >= min_order and all symmetry residuals <= symmetry_tol.
  bool passed() const;
};

/// Gradient and Hessian-vector oracles at control `u` along `directions`.
/// Zero directions and pairs touching them are skipped with a note. With
/// extended-precision forms the gradient exact values, difference quotients
/// and errors are all formed in WideReal from refined solves.
/// Symmetry is checked on the cyclic pairs (0,1), (1,2), ..., (n-1,0).
DerivativeReport check_derivatives(const ProblemSpec& spec, const Discretization& disc, const NodalField& u,
                                   const std::vector<NodalField>& directions, const VerifyOptions& opts);

/// The configured check: level, seed and directions from cfg.verify, at the
/// configured initial control.
DerivativeReport check_derivatives(const RunConfig& cfg);

/// Human-readable report, one line per check, ending in "verify: PASS" or "verify: FAIL".
std::string format_report(const DerivativeReport& report);

}  // namespace bssn
