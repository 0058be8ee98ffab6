// Acceptance suite: one PASS/FAIL line per criterion.
//
//   bssn_acceptance            run every criterion
//   bssn_acceptance 3 7        run criteria 3 and 7 only
//
// Exit status is 0 iff every selected criterion passes.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "bssn/cli.hpp"
#include "bssn/config.hpp"
#include "bssn/ssn.hpp"
#include "bssn/verification.hpp"

namespace {

using namespace bssn;
namespace fs = std::filesystem;

// Reference values of the h = 2^-7 convergence table and the active-set geometry.
constexpr double kJ0Reference = 3.9142466314434916;
constexpr double kJStarReference = 3.8210805974920712;
constexpr double kTableRelTol = 2e-3;
constexpr int kMinOuter = 4;
constexpr int kMaxOuter = 6;
constexpr double kTableSeconds = 60.0;

constexpr double kDecayRatio = 0.1;
constexpr double kDecayFloor = 1e-12;

constexpr int kOuterSpread = 1;
constexpr double kSweepSeconds = 180.0;

constexpr double kMeasureUpper = 0.459;
constexpr double kMeasureLower = 0.233;
constexpr double kMeasureInterior = 0.308;
constexpr double kMeasureTol = 0.02;
constexpr double kSigmaMax = 0.005;
constexpr double kTolSigma = 1e-8;

constexpr int kOracleLevel = 4;
constexpr int kOracleDirections = 5;
constexpr double kMinOrder = 1.9;
constexpr double kOracleSeconds = 30.0;
const std::vector<double> kGradientSteps{1e-2, 1e-3, 1e-4, 1e-5};
const std::vector<double> kHessianSteps{4e-1, 2e-1, 1e-1, 5e-2};
constexpr double kSymmetryTol = 1e-10;

constexpr double kOptimalityTol = 1e-10;
constexpr double kAnalyticTol = 1e-12;
constexpr int kMaxCg = 25;

const std::vector<int> kSweepLevels{5, 6, 7};
constexpr int kTableLevel = 7;

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double rel(double value, double reference) { return std::abs(value - reference) / std::abs(reference); }

/// Benchmark runs shared by several criteria, solved once per process.
struct SweepRun {
  SsnResult result;
  double seconds = 0.0;
  std::string error;
};

const SweepRun& sweep(int level) {
  static std::map<int, SweepRun> cache;
  if (const auto it = cache.find(level); it != cache.end()) return it->second;
  SweepRun run;
  const ProblemSpec spec = benchmark_instance();
  const auto start = std::chrono::steady_clock::now();
  try {
    const Discretization disc = Discretization::build(spec, level);
    SsnSolver solver(spec, disc);
    run.result = solver.run();
  } catch (const std::exception& e) {
    run.error = e.what();
  }
  run.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return cache.emplace(level, std::move(run)).first->second;
}

Verdict table_reproduction() {
  const SweepRun& r = sweep(kTableLevel);
  if (!r.error.empty()) return {false, "solver failed: " + r.error};
  const double j0 = r.result.history.front().J;
  const double js = r.result.J;
  const int outer = r.result.outer_iters;
  const bool ok = rel(j0, kJ0Reference) <= kTableRelTol && rel(js, kJStarReference) <= kTableRelTol &&
                  outer >= kMinOuter && outer <= kMaxOuter && r.seconds < kTableSeconds;
  return {ok, fmt("J(u0) = %.16e (rel %.2e), J* = %.16e (rel %.2e), %d outer iterations, %.2f s", j0,
                  rel(j0, kJ0Reference), js, rel(js, kJStarReference), outer, r.seconds)};
}

Verdict superlinear_decay() {
  bool ok = true;
  std::string detail;
  for (int level : kSweepLevels) {
    const SweepRun& r = sweep(level);
    if (!r.error.empty()) return {false, fmt("level %d: solver failed: ", level) + r.error};
    std::vector<double> delta;
    for (const auto& rec : r.result.history) {
      if (rec.delta) delta.push_back(*rec.delta);
    }
    double worst = 0.0;
    int checked = 0;
    for (std::size_t j = 1; j + 1 < delta.size() && delta[j] >= kDecayFloor; ++j) {
      worst = std::max(worst, delta[j + 1] / delta[j]);
      ++checked;
    }
    ok = ok && checked > 0 && worst <= kDecayRatio;
    if (!detail.empty()) detail += "; ";
    detail += fmt("level %d: max ratio %.2e over %d steps", level, worst, checked);
  }
  return {ok, detail};
}

Verdict mesh_independence() {
  int lo = 1 << 30;
  int hi = 0;
  double seconds = 0.0;
  std::string detail = "outer iterations";
  for (int level : kSweepLevels) {
    const SweepRun& r = sweep(level);
    if (!r.error.empty()) return {false, fmt("level %d: solver failed: ", level) + r.error};
    lo = std::min(lo, r.result.outer_iters);
    hi = std::max(hi, r.result.outer_iters);
    seconds += r.seconds;
    detail += fmt(" %d:%d", level, r.result.outer_iters);
  }
  return {hi - lo <= kOuterSpread && seconds < kSweepSeconds, detail + fmt(", %.2f s total", seconds)};
}

Verdict active_set_geometry() {
  const SweepRun& r = sweep(kTableLevel);
  if (!r.error.empty()) return {false, "solver failed: " + r.error};
  const ProblemSpec spec = benchmark_instance();
  const Discretization disc = Discretization::build(spec, kTableLevel);
  const ComplementarityReport c =
      complementarity_report(spec, disc, r.result.u, r.result.y, r.result.phi, kTolSigma);
  const bool ok = std::abs(c.upper - kMeasureUpper) <= kMeasureTol && std::abs(c.lower - kMeasureLower) <= kMeasureTol &&
                  std::abs(c.interior - kMeasureInterior) <= kMeasureTol && c.sigma <= kSigmaMax;
  return {ok, fmt("level %d: |u=beta| = %.4f, |u=alpha| = %.4f, interior = %.4f, sigma = %.2e", kTableLevel,
                  c.upper, c.lower, c.interior, c.sigma)};
}

std::string orders(const std::vector<OrderCheck>& checks) {
  std::string s;
  for (const auto& c : checks) s += fmt(" %.2f", c.order);
  return s;
}

Verdict gradient_oracle() {
  const ProblemSpec spec = benchmark_instance();
  const Discretization disc = Discretization::build(spec, kOracleLevel);
  const NodalField u0 = NodalField::Zero(disc.size());
  VerifyOptions opts;
  opts.directions = kOracleDirections;
  opts.gradient_steps = kGradientSteps;
  const auto dirs = random_directions(disc.mesh, kOracleDirections, opts.seed);

  const auto start = std::chrono::steady_clock::now();
  const DerivativeReport rep = check_derivatives(spec, disc, u0, dirs, opts);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  bool ok = seconds < kOracleSeconds && rep.gradient.size() == dirs.size();
  double max_error = 0.0;
  for (const auto& c : rep.gradient) {
    ok = ok && !c.skipped && c.order >= kMinOrder;
    for (double e : c.errors) max_error = std::max(max_error, e);
  }
  return {ok, fmt("t in {1e-2..1e-5}: orders%s (errors <= %.1e, %s, %.2f s)", orders(rep.gradient).c_str(),
                  max_error, rep.refined_gradient ? "extended-precision solves" : "double-precision solves",
                  seconds)};
}

Verdict hessian_oracle() {
  const ProblemSpec spec = benchmark_instance();
  const Discretization disc = Discretization::build(spec, kOracleLevel);
  VerifyOptions opts;
  opts.directions = kOracleDirections;
  opts.hessian_steps = kHessianSteps;
  opts.symmetry_tol = kSymmetryTol;
  const auto dirs = random_directions(disc.mesh, kOracleDirections, opts.seed);
  const DerivativeReport rep = check_derivatives(spec, disc, NodalField::Zero(disc.size()), dirs, opts);

  bool ok = rep.hessian.size() == dirs.size() && rep.hessian_symmetry.size() == 5;
  double worst_sym = 0.0;
  for (const auto& c : rep.hessian) ok = ok && !c.skipped && c.order >= kMinOrder;
  for (const auto& s : rep.hessian_symmetry) {
    ok = ok && !s.skipped && s.relative <= kSymmetryTol;
    worst_sym = std::max(worst_sym, s.relative);
  }
  return {ok, fmt("orders%s; symmetry residual <= %.2e on %zu pairs", orders(rep.hessian).c_str(), worst_sym,
                  rep.hessian_symmetry.size())};
}

Verdict optimality_residual_check() {
  const SweepRun& r = sweep(kTableLevel);
  if (!r.error.empty()) return {false, "solver failed: " + r.error};
  return {r.result.optimality_inf <= kOptimalityTol,
          fmt("level %d: ||u - clamp(y phi / nu)||_inf = %.2e", kTableLevel, r.result.optimality_inf)};
}

Verdict analytic_states() {
  ProblemSpec spec;
  spec.a = [](const Point&, double y) { return y - 1.0; };
  spec.da_dy = [](const Point&, double) { return 1.0; };
  spec.d2a_dy2 = [](const Point&, double) { return 0.0; };
  spec.L = [](const Point&, double) { return 0.0; };
  spec.dL_dy = [](const Point&, double) { return 0.0; };
  spec.d2L_dy2 = [](const Point&, double) { return 0.0; };
  spec.g = [](const Point&) { return 0.0; };
  spec.nu = 1.0;
  spec.a0 = 1.0;
  spec.bounds = {-0.9, 10.0};

  double worst = 0.0;
  std::string detail;
  for (int level : {3, 6}) {
    const Discretization disc = Discretization::build(spec, level);
    const NodalField zero = NodalField::Zero(disc.size());
    for (double c : {0.0, -0.5, 0.75, 3.0}) {
      const StateSolveReport s = solve_state(spec, disc, NodalField::Constant(disc.size(), c), zero);
      worst = std::max(worst, (s.y.array() - 1.0 / (1.0 + c)).abs().maxCoeff());
    }
  }
  return {worst <= kAnalyticTol, fmt("max error %.2e over u = 0, -0.5, 0.75, 3 at levels 3 and 6", worst)};
}

Verdict cg_behaviour() {
  int worst = 0;
  std::string detail = "max CG iterations per level";
  for (int level : kSweepLevels) {
    const SweepRun& r = sweep(level);
    // Non-positive curvature aborts the run, so a converged run had none.
    if (!r.error.empty()) return {false, fmt("level %d: ", level) + r.error};
    int level_max = 0;
    for (const auto& rec : r.result.history) {
      if (rec.cg_iters) level_max = std::max(level_max, *rec.cg_iters);
    }
    worst = std::max(worst, level_max);
    detail += fmt(" %d:%d", level, level_max);
  }
  return {worst <= kMaxCg, detail + ", no non-positive curvature"};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Verdict determinism() {
  const fs::path dir = fs::temp_directory_path() / "bssn_acceptance_determinism";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const fs::path cfg = dir / "benchmark.cfg";
  std::ofstream(cfg) << "[problem]\nkind = benchmark\n[mesh]\nlevels = 5, 7\n[output]\ndirectory = out\n";

  const std::vector<int> levels{5, 7};
  std::vector<std::string> first;
  std::vector<std::string> second;
  for (auto* target : {&first, &second}) {
    int code = 0;
#ifdef BSSN_CLI_PATH
    const std::string cmd = std::string("\"") + BSSN_CLI_PATH + "\" run \"" + cfg.string() + "\" > /dev/null";
    code = std::system(cmd.c_str());
#else
    std::ostringstream sink;
    code = run(parse_config(cfg), sink);
#endif
    if (code != 0) return {false, fmt("run exited with status %d", code)};
    for (int level : levels) target->push_back(slurp(dir / "out" / ("level_" + std::to_string(level)) / "convergence.csv"));
  }
  fs::remove_all(dir);
  bool same = true;
  for (std::size_t k = 0; k < levels.size(); ++k) same = same && !first[k].empty() && first[k] == second[k];
  return {same, same ? "convergence CSVs of levels 5 and 7 byte-identical across two runs"
                     : "convergence CSVs differ between runs"};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Verdict()> check;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria{
      {1, "table reproduction at h = 2^-7", table_reproduction},
      {2, "superlinear decay of delta", superlinear_decay},
      {3, "mesh independence", mesh_independence},
      {4, "active-set geometry", active_set_geometry},
      {5, "gradient oracle", gradient_oracle},
      {6, "Hessian-vector oracle", hessian_oracle},
      {7, "optimality residual", optimality_residual_check},
      {8, "analytic constant states", analytic_states},
      {9, "CG behaviour", cg_behaviour},
      {10, "determinism", determinism},
  };

  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  int failures = 0;
  for (const Criterion& c : criteria) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    Verdict v;
    try {
      v = c.check();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    std::printf("[%s] %2d %s: %s\n", v.pass ? "PASS" : "FAIL", c.id, c.name, v.detail.c_str());
    std::fflush(stdout);
    failures += v.pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
