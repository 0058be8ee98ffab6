#pragma once

#include <memory>
#include <span>
#include <vector>

#include "bssn/pde_solvers.hpp"

namespace bssn {

/// Reduced objective and gradient at one control.
struct ReducedEval {
  NodalField u;
  NodalField y;
  NodalField phi;
  double J = 0.0;
  /// nu u - y phi, the nodal representative of J'(u) in the lumped inner product.
  NodalField grad;
  int newton_iters = 0;
  /// Factorized operator at (u, y); reused by every solve of the outer step.
  std::shared_ptr<const LinearizedOperator> linearization;
};

/// sum_i m_i [L(x_i, y_i) + nu/2 u_i^2].
double objective(const ProblemSpec& spec, const Discretization& disc, const NodalField& u, const NodalField& y);

/// nu u - y phi, nodewise.
NodalField gradient(const ProblemSpec& spec, const NodalField& u, const NodalField& y, const NodalField& phi);

/// nu v - (phi z + y eta) with z, eta the linearized state / adjoint for v.
/// <hessian_vec(v), w>_M is then J''(u)(v, w).
NodalField hessian_vec(const ProblemSpec& spec, const LinearizedOperator& op, const NodalField& phi,
                       const NodalField& v);

NodalField hessian_vec(const ProblemSpec& spec, const Discretization& disc, const NodalField& u,
                       const NodalField& y, const NodalField& phi, const NodalField& v);

/// State solve, adjoint solve, J and gradient in one call.
ReducedEval evaluate_reduced(PdeSolver& solver, const NodalField& u, const NodalField& y_init,
                             const NewtonOptions& opts = {});

/// J(u) through a fresh state solve from y_init.
double reduced_objective(PdeSolver& solver, const NodalField& u, const NodalField& y_init,
                         const NewtonOptions& opts = {});

// Finite-difference oracles. They only call the state solver and objective,
// never the adjoint or sensitivity equations.

/// (J(u + t v) - J(u - t v)) / (2 t). When the problem provides
/// extended-precision forms, both objectives come from refined state solves.
double fd_gradient_oracle(PdeSolver& solver, const NodalField& u, const NodalField& v, double t,
                          const NodalField& y_init);

/// (J(u + t v) - 2 J(u) + J(u - t v)) / t^2.
double fd_curvature_oracle(PdeSolver& solver, const NodalField& u, const NodalField& v, double t,
                           const NodalField& y_init);

/// Least-squares slope of log(error) against log(t).
double observed_order(std::span<const double> steps, std::span<const double> errors);

}  // namespace bssn
