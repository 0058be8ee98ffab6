#include "bssn/refined.hpp"

#include <cmath>
#include <limits>

#include "bssn/errors.hpp"

namespace bssn {

namespace {

constexpr int kMaxRefinements = 30;

WideReal wide_epsilon() {
  WideReal e = 1;
  while (1 + e / 2 > 1) e /= 2;
  return e;
}

// Corrections below this fraction of the iterate are at the rounding floor of WideReal.
const WideReal kRefineTol = 1e6 * wide_epsilon();

WideReal wide_abs(WideReal x) { return x < 0 ? -x : x; }

WideReal max_abs(const WideField& x) {
  WideReal m = 0;
  for (WideReal v : x) m = wide_abs(v) > m ? wide_abs(v) : m;
  return m;
}

NewtonOptions polished() {
  NewtonOptions opts;
  opts.tol = 1e-300;
  opts.step_tol = 1e-15;
  return opts;
}

}  // namespace

WideField widen(const NodalField& f) {
  WideField out(static_cast<std::size_t>(f.size()));
  for (Eigen::Index i = 0; i < f.size(); ++i) out[static_cast<std::size_t>(i)] = f[i];
  return out;
}

NodalField narrow(const WideField& f) {
  NodalField out(static_cast<Eigen::Index>(f.size()));
  for (std::size_t i = 0; i < f.size(); ++i) out[static_cast<Eigen::Index>(i)] = static_cast<double>(f[i]);
  return out;
}

WideField wide_axpy(const NodalField& u, double t, const NodalField& v) {
  if (u.size() != v.size()) throw ConfigError("wide_axpy: field sizes differ");
  WideField out(static_cast<std::size_t>(u.size()));
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    out[static_cast<std::size_t>(i)] = static_cast<WideReal>(u[i]) + static_cast<WideReal>(t) * v[i];
  }
  return out;
}

RefinedEvaluator::RefinedEvaluator(PdeSolver& solver)
    : solver_(&solver), disc_(&solver.discretization()), forms_(nullptr) {
  if (!solver.spec().wide) throw ConfigError("problem has no extended-precision forms");
  forms_ = &*solver.spec().wide;
}

WideField RefinedEvaluator::stiffness_times(const WideField& x) const {
  const SparseOperator& k = disc_->stiffness;
  WideField out(x.size(), 0);
  for (int col = 0; col < k.outerSize(); ++col) {
    for (SparseOperator::InnerIterator it(k, col); it; ++it) {
      out[static_cast<std::size_t>(it.row())] += static_cast<WideReal>(it.value()) * x[static_cast<std::size_t>(it.col())];
    }
  }
  return out;
}

// residual(x) returns rhs - A x in WideReal; op approximates A.
WideField RefinedEvaluator::refine(WideField x, const LinearizedOperator& op, auto residual) const {
  WideReal previous = std::numeric_limits<double>::infinity();
  for (int it = 0; it < kMaxRefinements; ++it) {
    const NodalField dx = op.solve(narrow(residual(x)));
    if (!dx.allFinite()) throw SolverError("refined solve produced a non-finite correction");
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += dx[static_cast<Eigen::Index>(i)];
    const WideReal size = dx.cwiseAbs().maxCoeff();
    const WideReal scale = std::max<WideReal>(1, max_abs(x));
    // Stop at the tolerance, or once corrections stop shrinking: rounding floor.
    if (size <= kRefineTol * scale || size > previous / 2) return x;
    previous = size;
  }
  throw SolverError("refined solve did not converge");
}

WideField RefinedEvaluator::state(const WideField& u, const NodalField& y_init) {
  const NodalField ud = narrow(u);
  const StateSolveReport start = solver_->solve_state(ud, y_init, polished());
  const LinearizedOperator op = solver_->linearize(ud, start.y);
  const auto& nodes = disc_->mesh.nodes();
  const auto& m = disc_->lumped.diagonal();
  const NodalField& b = disc_->boundary_load;
  return refine(widen(start.y), op, [&](const WideField& y) {
    WideField r = stiffness_times(y);
    for (std::size_t i = 0; i < y.size(); ++i) {
      const auto k = static_cast<Eigen::Index>(i);
      r[i] = static_cast<WideReal>(b[k]) - r[i] -
             static_cast<WideReal>(m[k]) * (forms_->a(nodes[i], y[i]) + u[i] * y[i]);
    }
    return r;
  });
}

WideField RefinedEvaluator::adjoint(const WideField& u, const WideField& y) {
  const LinearizedOperator op = solver_->linearize(narrow(u), narrow(y));
  const auto& nodes = disc_->mesh.nodes();
  const auto& m = disc_->lumped.diagonal();
  WideField load(y.size());
  WideField reaction(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    const WideReal mi = m[static_cast<Eigen::Index>(i)];
    load[i] = mi * forms_->dL_dy(nodes[i], y[i]);
    reaction[i] = mi * (forms_->da_dy(nodes[i], y[i]) + u[i]);
  }
  return refine(widen(op.adjoint()), op, [&](const WideField& phi) {
    WideField r = stiffness_times(phi);
    for (std::size_t i = 0; i < phi.size(); ++i) r[i] = load[i] - r[i] - reaction[i] * phi[i];
    return r;
  });
}

WideReal RefinedEvaluator::objective(const WideField& u, const WideField& y) const {
  const auto& nodes = disc_->mesh.nodes();
  const auto& m = disc_->lumped.diagonal();
  const WideReal half_nu = static_cast<WideReal>(solver_->spec().nu) / 2;
  WideReal sum = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    sum += static_cast<WideReal>(m[static_cast<Eigen::Index>(i)]) * (forms_->L(nodes[i], y[i]) + half_nu * u[i] * u[i]);
  }
  return sum;
}

WideField RefinedEvaluator::gradient(const WideField& u, const WideField& y, const WideField& phi) const {
  const WideReal nu = solver_->spec().nu;
  WideField g(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) g[i] = nu * u[i] - y[i] * phi[i];
  return g;
}

WideReal RefinedEvaluator::inner(const WideField& f, const NodalField& g) const {
  const auto& m = disc_->lumped.diagonal();
  WideReal sum = 0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    sum += static_cast<WideReal>(m[k]) * f[i] * g[k];
  }
  return sum;
}

WideReal RefinedEvaluator::fd_gradient(const NodalField& u, const NodalField& v, double t,
                                       const NodalField& y_init) {
  const WideField up = wide_axpy(u, t, v);
  const WideField um = wide_axpy(u, -t, v);
  const WideReal jp = objective(up, state(up, y_init));
  const WideReal jm = objective(um, state(um, y_init));
  return (jp - jm) / (2 * static_cast<WideReal>(t));
}

}  // namespace bssn
