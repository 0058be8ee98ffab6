#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "bssn/mesh.hpp"
#include "bssn/ssn.hpp"

namespace bssn {

/// `j,J,delta,newton_iters,cg_iters`, one row per record, reals as %.15e.
/// Absent delta / cg_iters (the final row) are left empty.
std::string format_convergence_csv(const std::vector<IterationRecord>& history);

/// Legacy-ASCII VTK structured grid with one point scalar named `name`,
/// nodes in lexicographic order (x1 fastest).
std::string format_vtk_field(const TriMesh& mesh, const NodalField& field, const std::string& name);

struct LevelSummary {
  int level = 0;
  double h = 0.0;
  std::size_t nodes = 0;
  int outer_iters = 0;
  double J = 0.0;
  double optimality_inf = 0.0;
  std::string stop_reason;
  double tol_sigma = 0.0;
  ComplementarityReport measures;
};

/// `key = value` lines.
std::string format_complementarity(const LevelSummary& s);

/// Writes `text` to `path`, creating parent directories. Throws std::runtime_error.
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace bssn
