#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "bssn/config.hpp"
#include "bssn/output.hpp"
#include "bssn/ssn.hpp"

namespace bssn {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitSolver = 2,
  kExitVerification = 3,
};

/// Result of solving one mesh level of a config.
struct LevelOutcome {
  int level = 0;
  /// Present when the solve converged.
  std::optional<SsnResult> result;
  /// Rows produced before a failure, or the full history on success.
  std::vector<IterationRecord> history;
  std::string error;
  double seconds = 0.0;
};

/// Solves one level without writing anything.
LevelOutcome solve_level(const RunConfig& cfg, int level);

/// Solves every configured level in order and writes
/// <directory>/level_<k>/{convergence.csv, u.vtk, y.vtk, phi.vtk, complementarity.txt}
/// according to cfg.output. A failed level keeps the rows it produced and
/// the remaining levels still run. Returns kExitOk or kExitSolver.
int run(const RunConfig& cfg, std::ostream& log);

/// Runs the derivative checks and prints the report. Returns kExitOk or kExitVerification.
int verify(const RunConfig& cfg, std::ostream& log);

/// Mesh statistics as key = value lines. Returns kExitOk or kExitUsage.
int mesh_info(int level, std::ostream& out, std::ostream& err);

/// Command-line entry point: run <config> | verify <config> | mesh-info <level>.
int cli_main(int argc, const char* const* argv);

}  // namespace bssn
