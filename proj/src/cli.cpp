#include "bssn/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <iostream>

#include "bssn/verification.hpp"

namespace bssn {

namespace {

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

}  // namespace

LevelOutcome solve_level(const RunConfig& cfg, int level) {
  LevelOutcome out;
  out.level = level;
  const auto start = std::chrono::steady_clock::now();
  const Discretization disc = Discretization::build(cfg.problem, level);
  SsnConfig sc = cfg.solver;
  sc.u0 = initial_control(cfg, disc.mesh);
  SsnSolver solver(cfg.problem, disc, sc);
  try {
    SsnResult r = solver.run();
    out.history = r.history;
    out.result = std::move(r);
  } catch (const NonConvergenceError& e) {
    out.history = e.history();
    out.error = e.what();
  } catch (const SolverError& e) {
    out.error = e.what();
  }
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

int run(const RunConfig& cfg, std::ostream& log) {
  int status = kExitOk;
  for (int level : cfg.levels) {
    const LevelOutcome oc = solve_level(cfg, level);
    const std::filesystem::path dir = cfg.output.directory / ("level_" + std::to_string(level));

    try {
      if (cfg.output.csv && (!oc.history.empty() || oc.result)) {
        write_text_file(dir / "convergence.csv", format_convergence_csv(oc.history));
      }
      if (oc.result) {
        const SsnResult& r = *oc.result;
        const TriMesh mesh = TriMesh::uniform(level);
        if (cfg.output.vtk) {
          write_text_file(dir / "u.vtk", format_vtk_field(mesh, r.u, "u"));
          write_text_file(dir / "y.vtk", format_vtk_field(mesh, r.y, "y"));
          write_text_file(dir / "phi.vtk", format_vtk_field(mesh, r.phi, "phi"));
        }
        if (cfg.output.report) {
          const Discretization disc = Discretization::build(cfg.problem, mesh);
          LevelSummary s;
          s.level = level;
          s.h = mesh.h();
          s.nodes = mesh.num_nodes();
          s.outer_iters = r.outer_iters;
          s.J = r.J;
          s.optimality_inf = r.optimality_inf;
          s.stop_reason = r.stop_reason;
          s.tol_sigma = cfg.output.tol_sigma;
          s.measures = complementarity_report(cfg.problem, disc, r.u, r.y, r.phi, cfg.output.tol_sigma);
          write_text_file(dir / "complementarity.txt", format_complementarity(s));
        }
      }
    } catch (const std::exception& e) {
      log << "level " << level << ": " << e.what() << "\n";
      return kExitUsage;
    }

    if (oc.result) {
      log << fmt("level %d: %d outer iterations, J = %.15e, optimality residual %.3e (%.2f s)\n", level,
                 oc.result->outer_iters, oc.result->J, oc.result->optimality_inf, oc.seconds);
    } else {
      log << "level " << level << ": solver failed: " << oc.error << "\n";
      status = kExitSolver;
    }
  }
  return status;
}

int verify(const RunConfig& cfg, std::ostream& log) {
  log << "verify: level " << cfg.verify.level << ", " << cfg.verify.directions << " directions, seed "
      << cfg.verify.seed << (cfg.verify.enabled ? "" : ", finite-difference checks off") << "\n";
  try {
    const DerivativeReport rep = check_derivatives(cfg);
    log << format_report(rep);
    return rep.passed() ? kExitOk : kExitVerification;
  } catch (const SolverError& e) {
    log << "verify: solver failed: " << e.what() << "\n";
    return kExitSolver;
  }
}

int mesh_info(int level, std::ostream& out, std::ostream& err) {
  try {
    const TriMesh mesh = TriMesh::uniform(level);
    const DiagonalOperator m = assemble_lumped_mass(mesh);
    double area = 0.0;
    for (std::size_t t = 0; t < mesh.num_triangles(); ++t) area += mesh.signed_area(t);
    out << "level = " << mesh.level() << "\n";
    out << "cells_per_side = " << mesh.cells_per_side() << "\n";
    out << "h = " << fmt("%.15e", mesh.h()) << "\n";
    out << "nodes = " << mesh.num_nodes() << "\n";
    out << "triangles = " << mesh.num_triangles() << "\n";
    out << "boundary_edges = " << mesh.boundary_edges().size() << "\n";
    out << "area = " << fmt("%.15e", area) << "\n";
    out << "lumped_mass_total = " << fmt("%.15e", m.diagonal().sum()) << "\n";
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "mesh-info: " << e.what() << "\n";
    return kExitUsage;
  }
}

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"Semismooth Newton solver for bilinear control of a semilinear elliptic problem"};
  app.require_subcommand(1);

  std::string run_path;
  std::string verify_path;
  int level = 0;
  CLI::App* run_cmd = app.add_subcommand("run", "Solve every configured mesh level and write the outputs");
  run_cmd->add_option("config", run_path, "Config file")->required();
  CLI::App* verify_cmd = app.add_subcommand("verify", "Finite-difference checks of gradient and Hessian");
  verify_cmd->add_option("config", verify_path, "Config file")->required();
  CLI::App* info_cmd = app.add_subcommand("mesh-info", "Print statistics of a uniform mesh");
  info_cmd->add_option("level", level, "Refinement level, h = 2^-level")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*info_cmd) return mesh_info(level, std::cout, std::cerr);
    const bool is_run = static_cast<bool>(*run_cmd);
    const RunConfig cfg = parse_config(is_run ? run_path : verify_path);
    return is_run ? run(cfg, std::cout) : verify(cfg, std::cout);
  } catch (const ConfigError& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace bssn
