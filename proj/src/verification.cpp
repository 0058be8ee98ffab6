#include "bssn/verification.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <optional>
#include <random>

#include "bssn/derivatives.hpp"
#include "bssn/refined.hpp"
#include "bssn/ssn.hpp"

namespace bssn {

namespace {

constexpr int kModes = 4;  // cosine modes 0..3 per axis

double unit_uniform(std::mt19937_64& rng) {
  // 53 random bits mapped to [-1, 1); avoids the library-specific distributions.
  return static_cast<double>(rng() >> 11) * 0x1.0p-52 - 1.0;
}

std::string line(const char* fmt, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

NewtonOptions polished_newton() {
  NewtonOptions o;
  o.tol = 1e-300;
  o.step_tol = 1e-15;
  return o;
}

SymmetryCheck symmetry(const DiagonalOperator& lumped, int i, int j, const NodalField& vi, const NodalField& hvi,
                       const NodalField& vj, const NodalField& hvj) {
  SymmetryCheck s{i, j, false, 0.0};
  const double scale = lumped_norm(lumped, hvi) * lumped_norm(lumped, vj);
  if (!(scale > 0.0)) {
    s.skipped = true;
    return s;
  }
  s.relative = std::abs(lumped_inner(lumped, hvi, vj) - lumped_inner(lumped, hvj, vi)) / scale;
  return s;
}

}  // namespace

std::vector<NodalField> random_directions(const TriMesh& mesh, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<NodalField> out;
  out.reserve(static_cast<std::size_t>(std::max(count, 0)));
  for (int d = 0; d < count; ++d) {
    double c[kModes][kModes];
    for (auto& row : c) {
      for (double& v : row) v = unit_uniform(rng);
    }
    NodalField v = sample_nodal(mesh, [&c](const Point& p) {
      double s = 0.0;
      for (int k = 0; k < kModes; ++k) {
        for (int l = 0; l < kModes; ++l) {
          s += c[k][l] * std::cos(k * std::numbers::pi * p.x1) * std::cos(l * std::numbers::pi * p.x2);
        }
      }
      return s;
    });
    const double sup = v.cwiseAbs().maxCoeff();
    if (sup > 0.0) v /= sup;
    out.push_back(std::move(v));
  }
  return out;
}

std::vector<double> default_gradient_steps(const ProblemSpec& spec) {
  if (spec.wide) return {1e-2, 1e-3, 1e-4, 1e-5};
  return {1e-1, 5e-2, 2.5e-2, 1.25e-2};
}

bool DerivativeReport::passed() const {
  int checked = 0;
  for (const auto* list : {&gradient, &hessian}) {
    for (const OrderCheck& c : *list) {
      if (c.skipped) continue;
      ++checked;
      if (!(c.order >= min_order)) return false;
    }
  }
  for (const auto* list : {&hessian_symmetry, &mj_symmetry}) {
    for (const SymmetryCheck& c : *list) {
      if (c.skipped) continue;
      ++checked;
      if (!(c.relative <= symmetry_tol)) return false;
    }
  }
  return checked > 0;
}

DerivativeReport check_derivatives(const ProblemSpec& spec, const Discretization& disc, const NodalField& u,
                                   const std::vector<NodalField>& directions, const VerifyOptions& opts) {
  DerivativeReport rep;
  rep.min_order = opts.min_order;
  rep.symmetry_tol = opts.symmetry_tol;

  PdeSolver solver(spec, disc);
  const NodalField y0 = NodalField::Zero(disc.size());
  const ReducedEval at = evaluate_reduced(solver, u, y0, polished_newton());
  const LinearizedOperator& op = *at.linearization;
  const DiagonalOperator& m = disc.lumped;
  const ActiveSets sets = classify(spec, at.y, at.phi);

  const int n = static_cast<int>(directions.size());
  std::vector<bool> zero(directions.size());
  std::vector<NodalField> hv(directions.size());
  std::vector<NodalField> mv(directions.size());
  for (int d = 0; d < n; ++d) {
    const NodalField& v = directions[static_cast<std::size_t>(d)];
    zero[d] = !(lumped_norm(m, v) > 0.0);
    if (zero[d]) continue;
    hv[d] = hessian_vec(spec, op, at.phi, v);
    mv[d] = apply_Mj(spec, op, at.phi, sets, v);
  }

  // Refined base point for the gradient check, when the problem allows it.
  std::optional<RefinedEvaluator> refined;
  WideField wide_grad;
  if (opts.enabled && spec.wide) {
    refined.emplace(solver);
    const WideField uw = widen(u);
    const WideField yw = refined->state(uw, at.y);
    wide_grad = refined->gradient(uw, yw, refined->adjoint(uw, yw));
    rep.refined_gradient = true;
  }
  const std::vector<double> gradient_steps =
      opts.gradient_steps.empty() ? default_gradient_steps(spec) : opts.gradient_steps;

  if (opts.enabled) {
    for (int d = 0; d < n; ++d) {
      const NodalField& v = directions[static_cast<std::size_t>(d)];
      OrderCheck g;
      OrderCheck h;
      g.direction = h.direction = d;
      if (zero[d]) {
        g.skipped = h.skipped = true;
        g.note = h.note = "zero direction";
        rep.gradient.push_back(g);
        rep.hessian.push_back(h);
        continue;
      }
      g.steps = gradient_steps;
      if (refined) {
        const WideReal exact = refined->inner(wide_grad, v);
        g.exact = static_cast<double>(exact);
        for (double t : g.steps) {
          const WideReal e = refined->fd_gradient(u, v, t, at.y) - exact;
          g.errors.push_back(std::abs(static_cast<double>(e)));
        }
      } else {
        g.exact = lumped_inner(m, at.grad, v);
        for (double t : g.steps) g.errors.push_back(std::abs(fd_gradient_oracle(solver, u, v, t, at.y) - g.exact));
      }
      h.exact = lumped_inner(m, hv[d], v);
      h.steps = opts.hessian_steps;
      for (double t : h.steps) h.errors.push_back(std::abs(fd_curvature_oracle(solver, u, v, t, at.y) - h.exact));

      for (OrderCheck* c : {&g, &h}) {
        bool resolvable = true;
        for (double e : c->errors) resolvable = resolvable && e > 0.0;
        if (resolvable) {
          c->order = observed_order(c->steps, c->errors);
        } else {
          c->order = std::numeric_limits<double>::quiet_NaN();
          c->note = "an error is exactly zero; order not resolvable";
        }
      }
      rep.gradient.push_back(std::move(g));
      rep.hessian.push_back(std::move(h));
    }
  }

  if (n >= 2) {
    for (int i = 0; i < n; ++i) {
      const int j = (i + 1) % n;
      if (n == 2 && i == 1) break;
      if (zero[i] || zero[j]) {
        rep.hessian_symmetry.push_back({i, j, true, 0.0});
        rep.mj_symmetry.push_back({i, j, true, 0.0});
        continue;
      }
      const auto& vi = directions[static_cast<std::size_t>(i)];
      const auto& vj = directions[static_cast<std::size_t>(j)];
      rep.hessian_symmetry.push_back(symmetry(m, i, j, vi, hv[i], vj, hv[j]));
      rep.mj_symmetry.push_back(symmetry(m, i, j, vi, mv[i], vj, mv[j]));
    }
  }
  return rep;
}

DerivativeReport check_derivatives(const RunConfig& cfg) {
  const Discretization disc = Discretization::build(cfg.problem, cfg.verify.level);
  const NodalField u = initial_control(cfg, disc.mesh);
  const auto dirs = random_directions(disc.mesh, cfg.verify.directions, cfg.verify.seed);
  return check_derivatives(cfg.problem, disc, u, dirs, cfg.verify);
}

std::string format_report(const DerivativeReport& rep) {
  std::string out;
  if (!rep.gradient.empty()) {
    out += rep.refined_gradient ? "gradient oracle: extended-precision state and adjoint solves\n"
                                : "gradient oracle: double-precision state solves\n";
  }
  auto verdict = [](bool ok) { return ok ? "ok" : "FAIL"; };
  for (const auto& [name, list] : {std::pair{"gradient", &rep.gradient}, std::pair{"hessian", &rep.hessian}}) {
    for (const OrderCheck& c : *list) {
      if (c.skipped) {
        out += line("%-8s direction %d: skipped (%s)\n", name, c.direction, c.note.c_str());
        continue;
      }
      out += line("%-8s direction %d: exact % .6e  order %.3f  %s\n", name, c.direction, c.exact, c.order,
                  verdict(c.order >= rep.min_order));
      for (std::size_t k = 0; k < c.steps.size(); ++k) {
        out += line("           t = %.4e  error %.4e\n", c.steps[k], c.errors[k]);
      }
      if (!c.note.empty()) out += "           note: " + c.note + "\n";
    }
  }
  for (const auto& [name, list] :
       {std::pair{"hessian symmetry", &rep.hessian_symmetry}, std::pair{"Mj symmetry", &rep.mj_symmetry}}) {
    for (const SymmetryCheck& c : *list) {
      if (c.skipped) {
        out += line("%s (%d,%d): skipped\n", name, c.first, c.second);
      } else {
        out += line("%s (%d,%d): relative residual %.3e  %s\n", name, c.first, c.second, c.relative,
                    verdict(c.relative <= rep.symmetry_tol));
      }
    }
  }
  out += rep.passed() ? "verify: PASS\n" : "verify: FAIL\n";
  return out;
}

}  // namespace bssn
