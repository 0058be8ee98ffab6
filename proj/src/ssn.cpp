#include "bssn/ssn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bssn {

NodalField ActiveSets::inactive_mask() const {
  NodalField m(static_cast<Eigen::Index>(state.size()));
  for (std::size_t i = 0; i < state.size(); ++i) m[static_cast<Eigen::Index>(i)] = state[i] == NodeState::Inactive;
  return m;
}

NodalField ActiveSets::active_mask() const {
  return NodalField::Ones(static_cast<Eigen::Index>(state.size())) - inactive_mask();
}

NodalField optimality_residual(const ProblemSpec& spec, const NodalField& u, const NodalField& y,
                               const NodalField& phi) {
  NodalField f(u.size());
  for (Eigen::Index i = 0; i < u.size(); ++i) f[i] = u[i] - spec.bounds.clamp(y[i] * phi[i] / spec.nu);
  return f;
}

ActiveSets classify(const ProblemSpec& spec, const NodalField& y, const NodalField& phi) {
  ActiveSets sets;
  const auto n = static_cast<std::size_t>(y.size());
  sets.state.resize(n, NodeState::Inactive);
  const double upper = spec.nu * spec.bounds.beta;
  const double lower = spec.nu * spec.bounds.alpha;
  const bool has_upper = spec.bounds.upper_finite();
  for (std::size_t i = 0; i < n; ++i) {
    const double s = y[static_cast<Eigen::Index>(i)] * phi[static_cast<Eigen::Index>(i)];
    if (has_upper && s >= upper) {
      sets.state[i] = NodeState::Upper;
      sets.upper.push_back(i);
    } else if (s <= lower) {
      sets.state[i] = NodeState::Lower;
      sets.lower.push_back(i);
    } else {
      sets.inactive.push_back(i);
    }
  }
  return sets;
}

SetMeasures measures_of(const DiagonalOperator& lumped, const ActiveSets& sets) {
  return {measure_of(lumped, sets.upper), measure_of(lumped, sets.lower), measure_of(lumped, sets.inactive)};
}

NodalField apply_Mj(const ProblemSpec& spec, const LinearizedOperator& op, const NodalField& phi,
                    const ActiveSets& sets, const NodalField& v) {
  const NodalField mask = sets.inactive_mask();
  const NodalField vi = mask.cwiseProduct(v);
  const NodalField z = op.linearized_state(vi);
  const NodalField eta = op.linearized_adjoint(phi, z, vi);
  const auto& y = op.state();
  return (mask.array() * (vi.array() - (z.array() * phi.array() + eta.array() * y.array()) / spec.nu)).matrix();
}

CgResult cg_solve(const LinearMap& apply, const NodalField& rhs, const DiagonalOperator& lumped, double tol,
                  int max_iters) {
  CgResult out;
  out.x = NodalField::Zero(rhs.size());
  NodalField r = rhs;
  double rr = lumped_inner(lumped, r, r);
  const double bnorm = std::sqrt(rr);
  if (bnorm == 0.0) return out;

  NodalField p = r;
  for (int k = 1; k <= max_iters; ++k) {
    const NodalField ap = apply(p);
    const double curvature = lumped_inner(lumped, p, ap);
    if (!(curvature > 0.0)) {
      throw SolverError("conjugate gradients met non-positive curvature at iteration " + std::to_string(k));
    }
    const double step = rr / curvature;
    out.x += step * p;
    r -= step * ap;
    const double rr_next = lumped_inner(lumped, r, r);
    out.iters = k;
    out.relative_residual = std::sqrt(rr_next) / bnorm;
    if (out.relative_residual <= tol) return out;
    p = r + (rr_next / rr) * p;
    rr = rr_next;
  }
  throw SolverError("conjugate gradients did not converge in " + std::to_string(max_iters) + " iterations");
}

// ---------------------------------------------------------------------------

SsnSolver::SsnSolver(ProblemSpec spec, const Discretization& disc, SsnConfig cfg)
    : pde_(std::move(spec), disc), disc_(&disc), cfg_(std::move(cfg)) {
  if (!(cfg_.outer_tol > 0.0) || !(cfg_.inner_tol > 0.0)) throw ConfigError("tolerances must be positive");
  if (cfg_.max_outer < 1) throw ConfigError("max_outer must be at least 1");
  if (cfg_.max_cg < 0) throw ConfigError("max_cg must be nonnegative");
  if (cfg_.u0.size() == 0) cfg_.u0 = NodalField::Zero(disc.size());
  if (cfg_.u0.size() != disc.size()) throw ConfigError("u0 does not match the mesh");
}

NewtonOptions SsnSolver::newton_options() const {
  NewtonOptions opts;
  opts.tol = cfg_.inner_tol;
  opts.max_iters = cfg_.max_newton;
  return opts;
}

ReducedEval SsnSolver::evaluate(const NodalField& u, const NodalField& y_init) {
  return evaluate_reduced(pde_, u, y_init, newton_options());
}

StepResult SsnSolver::step(const ReducedEval& at) {
  const ProblemSpec& spec = pde_.spec();
  const auto& lumped = disc_->lumped;
  const Eigen::Index n = disc_->size();
  const double alpha = spec.bounds.alpha;
  const double beta = spec.bounds.beta;

  StepResult out;
  out.sets = classify(spec, at.y, at.phi);

  out.w.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    switch (out.sets.state[static_cast<std::size_t>(i)]) {
      case NodeState::Upper: out.w[i] = beta - at.u[i]; break;
      case NodeState::Lower: out.w[i] = alpha - at.u[i]; break;
      case NodeState::Inactive: out.w[i] = at.y[i] * at.phi[i] / spec.nu - at.u[i]; break;
    }
  }

  const NodalField inactive = out.sets.inactive_mask();
  const NodalField w_active = out.sets.active_mask().cwiseProduct(out.w);

  std::optional<LinearizedOperator> owned;
  if (!at.linearization) owned.emplace(pde_.linearize(at.u, at.y));
  const LinearizedOperator& op = at.linearization ? *at.linearization : *owned;
  const NodalField z = op.linearized_state(w_active);
  const NodalField eta = op.linearized_adjoint(at.phi, z, w_active);
  out.rhs = (inactive.array() *
             (out.w.array() + (z.array() * at.phi.array() + at.y.array() * eta.array()) / spec.nu))
                .matrix();

  const int max_cg = cfg_.max_cg > 0 ? cfg_.max_cg : static_cast<int>(n);
  const LinearMap apply = [&](const NodalField& v) { return apply_Mj(spec, op, at.phi, out.sets, v); };
  CgResult cg = cg_solve(apply, out.rhs, lumped, cfg_.inner_tol, max_cg);
  out.cg_iters = cg.iters;
  out.v_inactive = inactive.cwiseProduct(cg.x);

  out.v = w_active + out.v_inactive;
  out.u_next = at.u + out.v;
  out.delta = lumped_norm(lumped, out.v) / std::max(1.0, lumped_norm(lumped, out.u_next));
  return out;
}

SsnResult SsnSolver::run() {
  const ProblemSpec& spec = pde_.spec();
  const auto& lumped = disc_->lumped;
  constexpr double eps = std::numeric_limits<double>::epsilon();

  SsnResult result;
  ReducedEval current = evaluate(cfg_.u0, NodalField::Zero(disc_->size()));
  std::optional<double> previous_J;

  for (int j = 0;; ++j) {
    IterationRecord rec;
    rec.j = j;
    rec.J = current.J;
    rec.newton_iters = current.newton_iters;
    rec.measures = measures_of(lumped, classify(spec, current.y, current.phi));

    if (previous_J && std::abs(current.J - *previous_J) <= eps * std::max(1.0, std::abs(*previous_J))) {
      result.history.push_back(rec);
      result.stop_reason = "objective stagnated at machine precision";
      break;
    }
    if (j >= cfg_.max_outer) {
      result.history.push_back(rec);
      throw NonConvergenceError("semismooth Newton did not converge in " + std::to_string(cfg_.max_outer) +
                                    " iterations",
                                std::move(result.history));
    }

    const StepResult s = step(current);
    rec.delta = s.delta;
    rec.cg_iters = s.cg_iters;
    result.history.push_back(rec);
    ++result.outer_iters;

    previous_J = current.J;
    current = evaluate(s.u_next, current.y);

    if (s.delta < cfg_.outer_tol) {
      IterationRecord last;
      last.j = j + 1;
      last.J = current.J;
      last.newton_iters = current.newton_iters;
      last.measures = measures_of(lumped, classify(spec, current.y, current.phi));
      result.history.push_back(last);
      result.stop_reason = "step below outer tolerance";
      break;
    }
  }

  result.u = std::move(current.u);
  result.y = std::move(current.y);
  result.phi = std::move(current.phi);
  result.J = current.J;
  result.optimality_inf = optimality_residual(spec, result.u, result.y, result.phi).lpNorm<Eigen::Infinity>();
  return result;
}

ComplementarityReport complementarity_report(const ProblemSpec& spec, const Discretization& disc,
                                             const NodalField& u, const NodalField& y, const NodalField& phi,
                                             double tol_sigma) {
  ComplementarityReport rep;
  const auto& m = disc.lumped.diagonal();
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    const bool at_upper = spec.bounds.upper_finite() && std::abs(u[i] - spec.bounds.beta) <= tol_sigma;
    const bool at_lower = !at_upper && std::abs(u[i] - spec.bounds.alpha) <= tol_sigma;
    if (at_upper) {
      rep.upper += m[i];
    } else if (at_lower) {
      rep.lower += m[i];
    } else {
      rep.interior += m[i];
    }
    if ((at_upper || at_lower) && std::abs(spec.nu * u[i] - y[i] * phi[i]) <= tol_sigma) rep.sigma += m[i];
  }
  return rep;
}

}  // namespace bssn
