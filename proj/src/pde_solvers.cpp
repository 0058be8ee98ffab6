#include "bssn/pde_solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "bssn/errors.hpp"

namespace bssn {

namespace {

void require_size(const NodalField& f, Eigen::Index n, const char* what) {
  if (f.size() != n) {
    throw ConfigError(std::string(what) + ": field has " + std::to_string(f.size()) + " entries, mesh has " +
                      std::to_string(n) + " nodes");
  }
}

// K + diag(shift). K stores every diagonal entry, so the pattern is unchanged.
SparseOperator shifted(const SparseOperator& k, const Eigen::VectorXd& shift) {
  SparseOperator out = k;
  for (Eigen::Index i = 0; i < out.outerSize(); ++i) out.coeffRef(i, i) += shift[i];
  return out;
}

// LDL^T succeeds numerically on singular matrices; a pivot at rounding
// level relative to the largest one marks the matrix as singular.
bool factorization_ok(const Factorization& f) {
  if (f.info() != Eigen::Success) return false;
  const Eigen::VectorXd d = f.vectorD().cwiseAbs();
  if (d.size() == 0) return true;
  return d.allFinite() && d.minCoeff() > 1e3 * std::numeric_limits<double>::epsilon() * d.maxCoeff();
}

}  // namespace

Discretization Discretization::build(const ProblemSpec& spec, TriMesh mesh) {
  Discretization d{std::move(mesh), {}, {}, {}};
  d.stiffness = assemble_stiffness(d.mesh, spec.diffusion);
  d.lumped = assemble_lumped_mass(d.mesh);
  d.boundary_load = spec.g ? assemble_boundary_load(d.mesh, spec.g)
                           : NodalField::Zero(static_cast<Eigen::Index>(d.mesh.num_nodes()));
  return d;
}

NodalField evaluate_nodal(const Discretization& disc, const PointwiseFn& f, const NodalField& y) {
  require_size(y, disc.size(), "evaluate_nodal");
  const auto& nodes = disc.mesh.nodes();
  NodalField out(y.size());
  for (Eigen::Index i = 0; i < y.size(); ++i) out[i] = f(nodes[static_cast<std::size_t>(i)], y[i]);
  return out;
}

NodalField sample_nodal(const TriMesh& mesh, const std::function<double(const Point&)>& f) {
  NodalField out(static_cast<Eigen::Index>(mesh.num_nodes()));
  for (Eigen::Index i = 0; i < out.size(); ++i) out[i] = f(mesh.nodes()[static_cast<std::size_t>(i)]);
  return out;
}

// ---------------------------------------------------------------------------

LinearizedOperator::LinearizedOperator(const ProblemSpec& spec, const Discretization& disc, NodalField u,
                                       NodalField y)
    : disc_(&disc), u_(std::move(u)), y_(std::move(y)) {
  require_size(u_, disc.size(), "LinearizedOperator control");
  require_size(y_, disc.size(), "LinearizedOperator state");

  dL_ = evaluate_nodal(disc, spec.dL_dy, y_);
  d2L_ = evaluate_nodal(disc, spec.d2L_dy2, y_);
  d2a_ = evaluate_nodal(disc, spec.d2a_dy2, y_);
  const NodalField reaction = evaluate_nodal(disc, spec.da_dy, y_) + u_;
  matrix_ = shifted(disc.stiffness, disc.lumped.diagonal().cwiseProduct(reaction));

  factor_ = std::make_shared<Factorization>();
  factor_->compute(matrix_);
  if (!factorization_ok(*factor_)) {
    throw SolverError("factorization of the linearized operator failed (singular matrix)");
  }
}

NodalField LinearizedOperator::solve(const NodalField& rhs) const {
  require_size(rhs, disc_->size(), "LinearizedOperator::solve");
  NodalField x = factor_->solve(rhs);
  if (factor_->info() != Eigen::Success || !x.allFinite()) {
    throw SolverError("linear solve with the linearized operator failed");
  }
  return x;
}

NodalField LinearizedOperator::adjoint() const {
  return solve(disc_->lumped.diagonal().cwiseProduct(dL_));
}

NodalField LinearizedOperator::linearized_state(const NodalField& v) const {
  require_size(v, disc_->size(), "linearized_state direction");
  const auto& m = disc_->lumped.diagonal();
  return solve(-(m.array() * y_.array() * v.array()).matrix());
}

NodalField LinearizedOperator::linearized_adjoint(const NodalField& phi, const NodalField& z,
                                                  const NodalField& v) const {
  require_size(phi, disc_->size(), "linearized_adjoint phi");
  require_size(z, disc_->size(), "linearized_adjoint z");
  require_size(v, disc_->size(), "linearized_adjoint direction");
  const auto& m = disc_->lumped.diagonal();
  const Eigen::ArrayXd weight = d2L_.array() - phi.array() * d2a_.array();
  return solve((m.array() * (weight * z.array() - phi.array() * v.array())).matrix());
}

// ---------------------------------------------------------------------------

PdeSolver::PdeSolver(ProblemSpec spec, const Discretization& disc) : spec_(std::move(spec)), disc_(&disc) {
  newton_factor_.analyzePattern(disc.stiffness);
}

NodalField PdeSolver::state_residual(const NodalField& u, const NodalField& y) const {
  const auto& m = disc_->lumped.diagonal();
  const NodalField a = evaluate_nodal(*disc_, spec_.a, y);
  NodalField r = disc_->stiffness * y;
  r.array() += m.array() * (a.array() + u.array() * y.array());
  r -= disc_->boundary_load;
  return r;
}

double PdeSolver::residual_norm(const NodalField& r) const { return lumped_norm(disc_->lumped, r); }

StateSolveReport PdeSolver::solve_state(const NodalField& u, const NodalField& y_init, const NewtonOptions& opts) {
  require_size(u, disc_->size(), "solve_state control");
  require_size(y_init, disc_->size(), "solve_state initial guess");
  if (!(opts.tol > 0.0)) throw ConfigError("Newton tolerance must be positive");

  const auto& m = disc_->lumped.diagonal();
  const double step_tol = opts.step_tol > 0.0 ? opts.step_tol : opts.tol;
  // Below this relative step size the residual sits at the rounding floor.
  const double floor_tol = std::max(step_tol, 1e3 * std::numeric_limits<double>::epsilon());
  StateSolveReport report;
  report.y = y_init;
  NodalField r = state_residual(u, report.y);
  double rn = residual_norm(r);
  report.residual_history.push_back(rn);

  while (true) {
    if (rn <= opts.tol) {
      report.final_residual = rn;
      return report;
    }
    if (report.newton_iters >= opts.max_iters) break;

    const NodalField reaction = evaluate_nodal(*disc_, spec_.da_dy, report.y) + u;
    const SparseOperator jac = shifted(disc_->stiffness, m.cwiseProduct(reaction));
    newton_factor_.factorize(jac);
    if (!factorization_ok(newton_factor_)) {
      throw SolverError("Newton Jacobian factorization failed (singular matrix)", report.residual_history);
    }
    const NodalField step = newton_factor_.solve(-r);
    if (!step.allFinite()) throw SolverError("Newton step is not finite", report.residual_history);
    ++report.newton_iters;

    // Full step first; halve while the residual does not decrease.
    double lambda = 1.0;
    NodalField trial = report.y + step;
    NodalField r_trial = state_residual(u, trial);
    double rn_trial = residual_norm(r_trial);
    for (int k = 0; k < opts.max_halvings && !(rn_trial < rn); ++k) {
      lambda *= 0.5;
      trial = report.y + lambda * step;
      r_trial = state_residual(u, trial);
      rn_trial = residual_norm(r_trial);
    }

    const double step_norm = lambda * lumped_norm(disc_->lumped, step);
    const double scale = std::max(1.0, lumped_norm(disc_->lumped, report.y));
    if (!(rn_trial < rn)) {
      // No decrease possible at the rounding floor: accept a negligible step.
      if (lumped_norm(disc_->lumped, step) <= floor_tol * scale) {
        report.final_residual = rn;
        return report;
      }
      throw SolverError("Newton damping failed to reduce the state residual", report.residual_history);
    }

    report.y = std::move(trial);
    r = std::move(r_trial);
    rn = rn_trial;
    report.residual_history.push_back(rn);

    if (step_norm <= step_tol * scale) {
      report.final_residual = rn;
      return report;
    }
  }

  throw SolverError("Newton iteration for the state equation did not converge in " +
                        std::to_string(opts.max_iters) + " iterations",
                    report.residual_history);
}

LinearizedOperator PdeSolver::linearize(const NodalField& u, const NodalField& y) const {
  return LinearizedOperator(spec_, *disc_, u, y);
}

// ---------------------------------------------------------------------------

StateSolveReport solve_state(const ProblemSpec& spec, const Discretization& disc, const NodalField& u,
                             const NodalField& y_init, double tol) {
  PdeSolver solver(spec, disc);
  NewtonOptions opts;
  opts.tol = tol;
  return solver.solve_state(u, y_init, opts);
}

NodalField solve_adjoint(const ProblemSpec& spec, const Discretization& disc, const NodalField& u,
                         const NodalField& y) {
  return LinearizedOperator(spec, disc, u, y).adjoint();
}

NodalField solve_linearized_state(const ProblemSpec& spec, const Discretization& disc, const NodalField& u,
                                  const NodalField& y, const NodalField& v) {
  return LinearizedOperator(spec, disc, u, y).linearized_state(v);
}

NodalField solve_linearized_adjoint(const ProblemSpec& spec, const Discretization& disc, const NodalField& u,
                                    const NodalField& y, const NodalField& phi, const NodalField& z,
                                    const NodalField& v) {
  return LinearizedOperator(spec, disc, u, y).linearized_adjoint(phi, z, v);
}

}  // namespace bssn
