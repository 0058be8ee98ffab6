#pragma once

#include <Eigen/SparseCholesky>
#include <memory>
#include <vector>

#include "bssn/assembly.hpp"
#include "bssn/mesh.hpp"
#include "bssn/problem.hpp"

namespace bssn {

/// Mesh plus the operators that do not depend on the control: stiffness,
/// lumped mass and the Neumann load.
struct Discretization {
  TriMesh mesh;
  SparseOperator stiffness;
  DiagonalOperator lumped;
  NodalField boundary_load;

  static Discretization build(const ProblemSpec& spec, TriMesh mesh);
  static Discretization build(const ProblemSpec& spec, int level) { return build(spec, TriMesh::uniform(level)); }

  Eigen::Index size() const noexcept { return lumped.dimension(); }
};

/// f(x_i, y_i) at every node.
NodalField evaluate_nodal(const Discretization& disc, const PointwiseFn& f, const NodalField& y);

/// f(x_i) at every node.
NodalField sample_nodal(const TriMesh& mesh, const std::function<double(const Point&)>& f);

using Factorization = Eigen::SimplicialLDLT<SparseOperator, Eigen::Lower, Eigen::AMDOrdering<int>>;

/// K + D(da_dy(., y) + u) at a fixed (u, y), factorized once.
///
/// All linear solves of one outer iteration go through this object: the
/// adjoint equation, the linearized state equation and the linearized
/// adjoint equation. The matrix is symmetric, so it is also its own adjoint.
class LinearizedOperator {
 public:
  LinearizedOperator(const ProblemSpec& spec, const Discretization& disc, NodalField u, NodalField y);

  const NodalField& control() const noexcept { return u_; }
  const NodalField& state() const noexcept { return y_; }
  const SparseOperator& matrix() const noexcept { return matrix_; }

  /// Solves matrix() x = rhs. Throws SolverError on failure.
  NodalField solve(const NodalField& rhs) const;

  /// phi with [K + D(a_y + u)] phi = M dL_dy(., y).
  NodalField adjoint() const;

  /// z with [K + D(a_y + u)] z = -M (y v).
  NodalField linearized_state(const NodalField& v) const;

  /// eta with [K + D(a_y + u)] eta = M [(L_yy - phi a_yy) z] - M (phi v).
  NodalField linearized_adjoint(const NodalField& phi, const NodalField& z, const NodalField& v) const;

 private:
  const Discretization* disc_;
  NodalField u_;
  NodalField y_;
  NodalField dL_;
  /// L_yy(., y) at the nodes; a_yy is kept separately because phi varies.
  NodalField d2L_;
  NodalField d2a_;
  SparseOperator matrix_;
  std::shared_ptr<Factorization> factor_;
};

struct NewtonOptions {
  /// Stop when residual_norm <= tol.
  double tol = 5e-14;
  /// Also stop when the lumped norm of an accepted step is <= step_tol * max(1, ||y||).
  /// Zero means step_tol = tol.
  double step_tol = 0.0;
  int max_iters = 50;
  int max_halvings = 30;
};

struct StateSolveReport {
  NodalField y;
  int newton_iters = 0;
  double final_residual = 0.0;
  std::vector<double> residual_history;
};

/// Solver context for one (problem, mesh) pair. Owns the symbolic
/// factorization reused by every Newton step. Not safe for concurrent use.
class PdeSolver {
 public:
  /// `disc` must outlive the solver.
  PdeSolver(ProblemSpec spec, const Discretization& disc);

  const ProblemSpec& spec() const noexcept { return spec_; }
  const Discretization& discretization() const noexcept { return *disc_; }

  /// K y + M (a(., y) + u y) - b_g.
  NodalField state_residual(const NodalField& u, const NodalField& y) const;

  /// Norm used to stop Newton: lumped-L2 norm of the nodal residual vector.
  double residual_norm(const NodalField& r) const;

  /// Damped Newton for the state equation starting from y_init.
  StateSolveReport solve_state(const NodalField& u, const NodalField& y_init, const NewtonOptions& opts = {});

  LinearizedOperator linearize(const NodalField& u, const NodalField& y) const;

 private:
  ProblemSpec spec_;
  const Discretization* disc_;
  Factorization newton_factor_;
};

// One-shot forms; each builds and factorizes its own operator.

StateSolveReport solve_state(const ProblemSpec& spec, const Discretization& disc, const NodalField& u,
                             const NodalField& y_init, double tol = 5e-14);

NodalField solve_adjoint(const ProblemSpec& spec, const Discretization& disc, const NodalField& u,
                         const NodalField& y);

NodalField solve_linearized_state(const ProblemSpec& spec, const Discretization& disc, const NodalField& u,
                                  const NodalField& y, const NodalField& v);

NodalField solve_linearized_adjoint(const ProblemSpec& spec, const Discretization& disc, const NodalField& u,
                                    const NodalField& y, const NodalField& phi, const NodalField& z,
                                    const NodalField& v);

}  // namespace bssn
