#pragma once

#include <vector>

#include "bssn/pde_solvers.hpp"

namespace bssn {

using WideField = std::vector<WideReal>;

WideField widen(const NodalField& f);
NodalField narrow(const WideField& f);

/// u + t v, formed in WideReal so that the perturbation is not rounded away.
WideField wide_axpy(const NodalField& u, double t, const NodalField& v);

/// State, adjoint and reduced objective refined past double rounding, for
/// problems that provide ProblemSpec::wide.
///
/// Each solve starts from the double solution and applies iterative
/// refinement. Residuals are evaluated in WideReal, and corrections are
/// solved with the double factorization at the rounded iterate. Differences
/// of nearby objective values then stay accurate down to steps where a
/// double evaluation of J is dominated by rounding.
class RefinedEvaluator {
 public:
  /// Throws ConfigError when the problem has no extended-precision forms.
  explicit RefinedEvaluator(PdeSolver& solver);

  /// Solution of the discrete state equation for control u.
  WideField state(const WideField& u, const NodalField& y_init);

  /// phi with [K + D(a_y + u)] phi = M dL_dy(., y).
  WideField adjoint(const WideField& u, const WideField& y);

  /// sum_i m_i [L(x_i, y_i) + nu/2 u_i^2].
  WideReal objective(const WideField& u, const WideField& y) const;

  /// nu u - y phi, nodewise.
  WideField gradient(const WideField& u, const WideField& y, const WideField& phi) const;

  /// Lumped inner product.
  WideReal inner(const WideField& f, const NodalField& g) const;

  /// (J(u + t v) - J(u - t v)) / (2 t) with both objectives refined.
  WideReal fd_gradient(const NodalField& u, const NodalField& v, double t, const NodalField& y_init);

 private:
  WideField stiffness_times(const WideField& x) const;
  WideField refine(WideField x, const LinearizedOperator& op, auto residual) const;

  PdeSolver* solver_;
  const Discretization* disc_;
  const WideForms* forms_;
};

}  // namespace bssn
