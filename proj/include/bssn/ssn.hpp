#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bssn/derivatives.hpp"
#include "bssn/errors.hpp"
#include "bssn/pde_solvers.hpp"

namespace bssn {

enum class NodeState : std::uint8_t { Inactive, Upper, Lower };

/// Pointwise partition from the sign of y phi - nu * bound. Ties are active.
struct ActiveSets {
  std::vector<NodeState> state;
  std::vector<std::size_t> upper;
  std::vector<std::size_t> lower;
  std::vector<std::size_t> inactive;

  /// 1 on inactive nodes, 0 elsewhere.
  NodalField inactive_mask() const;
  NodalField active_mask() const;
};

struct SetMeasures {
  double upper = 0.0;
  double lower = 0.0;
  double inactive = 0.0;
};

struct SsnConfig {
  double outer_tol = 5e-14;
  double inner_tol = 5e-14;
  int max_outer = 30;
  /// 0 means the node count.
  int max_cg = 0;
  int max_newton = 50;
  /// Empty means u0 = 0.
  NodalField u0;
};

/// One row of the convergence table. The last row of a converged run has
/// J and the Newton count only.
struct IterationRecord {
  int j = 0;
  double J = 0.0;
  std::optional<double> delta;
  int newton_iters = 0;
  std::optional<int> cg_iters;
  SetMeasures measures;
};

class NonConvergenceError : public SolverError {
 public:
  NonConvergenceError(const std::string& what, std::vector<IterationRecord> history)
      : SolverError(what), history_(std::move(history)) {}
  const std::vector<IterationRecord>& history() const noexcept { return history_; }

 private:
  std::vector<IterationRecord> history_;
};

/// u - clamp(y phi / nu, alpha, beta), nodewise.
NodalField optimality_residual(const ProblemSpec& spec, const NodalField& u, const NodalField& y,
                               const NodalField& phi);

ActiveSets classify(const ProblemSpec& spec, const NodalField& y, const NodalField& phi);

SetMeasures measures_of(const DiagonalOperator& lumped, const ActiveSets& sets);

/// chi_I (v - (1/nu) (z phi + eta y)) with z, eta the sensitivities for chi_I v.
/// This is (1/nu) times the reduced Hessian restricted to the inactive set.
NodalField apply_Mj(const ProblemSpec& spec, const LinearizedOperator& op, const NodalField& phi,
                    const ActiveSets& sets, const NodalField& v);

struct CgResult {
  NodalField x;
  int iters = 0;
  double relative_residual = 0.0;
};

using LinearMap = std::function<NodalField(const NodalField&)>;

/// Conjugate gradients in the lumped-L2 inner product, zero initial guess.
/// Stops when ||r||_M <= tol ||rhs||_M. Throws SolverError on non-positive
/// curvature or when max_iters is exceeded.
CgResult cg_solve(const LinearMap& apply, const NodalField& rhs, const DiagonalOperator& lumped, double tol,
                  int max_iters);

/// Everything produced by one outer iteration, for logging and tests.
struct StepResult {
  NodalField u_next;
  NodalField w;
  NodalField v;
  /// CG solution of the inactive-set subproblem (zero off the inactive set).
  NodalField v_inactive;
  /// Right-hand side of the inactive-set subproblem.
  NodalField rhs;
  ActiveSets sets;
  int cg_iters = 0;
  double delta = 0.0;
};

struct SsnResult {
  NodalField u;
  NodalField y;
  NodalField phi;
  double J = 0.0;
  std::vector<IterationRecord> history;
  /// Number of rows carrying delta.
  int outer_iters = 0;
  /// ||u - clamp(y phi / nu)||_inf at the returned triple.
  double optimality_inf = 0.0;
  std::string stop_reason;
};

/// Algorithm driver for one (problem, mesh) pair. Owns its solver context.
class SsnSolver {
 public:
  /// `disc` must outlive the solver.
  SsnSolver(ProblemSpec spec, const Discretization& disc, SsnConfig cfg = {});

  const ProblemSpec& spec() const noexcept { return pde_.spec(); }
  const SsnConfig& config() const noexcept { return cfg_; }
  PdeSolver& pde() noexcept { return pde_; }

  /// State, adjoint and J at u, the state solve warm-started from y_init.
  ReducedEval evaluate(const NodalField& u, const NodalField& y_init);

  /// One semismooth Newton step from a consistent (u, y, phi).
  StepResult step(const ReducedEval& at);

  /// Full loop from cfg.u0. Throws NonConvergenceError after max_outer steps.
  SsnResult run();

 private:
  NewtonOptions newton_options() const;

  PdeSolver pde_;
  const Discretization* disc_;
  SsnConfig cfg_;
};

/// Measures of {u = beta}, {u = alpha}, and the rest, plus the measure of
/// nodes where a bound is attained and |nu u - y phi| <= tol_sigma.
struct ComplementarityReport {
  double upper = 0.0;
  double lower = 0.0;
  double interior = 0.0;
  double sigma = 0.0;
};

ComplementarityReport complementarity_report(const ProblemSpec& spec, const Discretization& disc,
                                             const NodalField& u, const NodalField& y, const NodalField& phi,
                                             double tol_sigma);

}  // namespace bssn
