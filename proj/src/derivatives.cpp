#include "bssn/derivatives.hpp"

#include <cmath>

#include "bssn/errors.hpp"
#include "bssn/refined.hpp"

namespace bssn {

double objective(const ProblemSpec& spec, const Discretization& disc, const NodalField& u, const NodalField& y) {
  const NodalField l = evaluate_nodal(disc, spec.L, y);
  if (u.size() != l.size()) throw ConfigError("objective: control and state sizes differ");
  const auto& m = disc.lumped.diagonal();
  // Neumaier summation: finite-difference oracles subtract nearby values of J.
  double sum = 0.0;
  double carry = 0.0;
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    const double term = m[i] * (l[i] + 0.5 * spec.nu * u[i] * u[i]);
    const double next = sum + term;
    carry += std::abs(sum) >= std::abs(term) ? (sum - next) + term : (term - next) + sum;
    sum = next;
  }
  return sum + carry;
}

NodalField gradient(const ProblemSpec& spec, const NodalField& u, const NodalField& y, const NodalField& phi) {
  if (u.size() != y.size() || u.size() != phi.size()) throw ConfigError("gradient: field sizes differ");
  return (spec.nu * u.array() - y.array() * phi.array()).matrix();
}

NodalField hessian_vec(const ProblemSpec& spec, const LinearizedOperator& op, const NodalField& phi,
                       const NodalField& v) {
  const NodalField z = op.linearized_state(v);
  const NodalField eta = op.linearized_adjoint(phi, z, v);
  return (spec.nu * v.array() - (phi.array() * z.array() + op.state().array() * eta.array())).matrix();
}

NodalField hessian_vec(const ProblemSpec& spec, const Discretization& disc, const NodalField& u,
                       const NodalField& y, const NodalField& phi, const NodalField& v) {
  return hessian_vec(spec, LinearizedOperator(spec, disc, u, y), phi, v);
}

ReducedEval evaluate_reduced(PdeSolver& solver, const NodalField& u, const NodalField& y_init,
                             const NewtonOptions& opts) {
  StateSolveReport state = solver.solve_state(u, y_init, opts);
  ReducedEval out;
  out.u = u;
  out.y = std::move(state.y);
  out.newton_iters = state.newton_iters;
  out.linearization = std::make_shared<const LinearizedOperator>(solver.linearize(out.u, out.y));
  out.phi = out.linearization->adjoint();
  out.J = objective(solver.spec(), solver.discretization(), out.u, out.y);
  out.grad = gradient(solver.spec(), out.u, out.y, out.phi);
  return out;
}

double reduced_objective(PdeSolver& solver, const NodalField& u, const NodalField& y_init,
                         const NewtonOptions& opts) {
  const StateSolveReport state = solver.solve_state(u, y_init, opts);
  return objective(solver.spec(), solver.discretization(), u, state.y);
}

namespace {

// Oracles difference nearby objective values, so every state solve is driven
// to the rounding floor rather than to the outer-loop tolerance.
NewtonOptions polished() {
  NewtonOptions opts;
  opts.tol = 1e-300;
  opts.step_tol = 1e-15;
  return opts;
}

}  // namespace

double fd_gradient_oracle(PdeSolver& solver, const NodalField& u, const NodalField& v, double t,
                          const NodalField& y_init) {
  if (solver.spec().wide) return static_cast<double>(RefinedEvaluator(solver).fd_gradient(u, v, t, y_init));
  const NodalField up = u + t * v;
  const NodalField um = u - t * v;
  return (reduced_objective(solver, up, y_init, polished()) - reduced_objective(solver, um, y_init, polished())) / (2.0 * t);
}

double fd_curvature_oracle(PdeSolver& solver, const NodalField& u, const NodalField& v, double t,
                           const NodalField& y_init) {
  const NodalField up = u + t * v;
  const NodalField um = u - t * v;
  const double jp = reduced_objective(solver, up, y_init, polished());
  const double j0 = reduced_objective(solver, u, y_init, polished());
  const double jm = reduced_objective(solver, um, y_init, polished());
  return (jp - 2.0 * j0 + jm) / (t * t);
}

double observed_order(std::span<const double> steps, std::span<const double> errors) {
  if (steps.size() != errors.size() || steps.size() < 2) {
    throw ConfigError("observed_order needs at least two (step, error) pairs");
  }
  double sx = 0.0;
  double sy = 0.0;
  double sxx = 0.0;
  double sxy = 0.0;
  const double n = static_cast<double>(steps.size());
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const double x = std::log(steps[i]);
    const double y = std::log(errors[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace bssn
