#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "bssn/errors.hpp"
#include "bssn/expression.hpp"
#include "bssn/problem.hpp"
#include "bssn/ssn.hpp"

namespace bssn {

/// Every problem found while reading a config file, one "file:line:col: message" per entry.
class ConfigDiagnostics : public ConfigError {
 public:
  explicit ConfigDiagnostics(std::vector<std::string> messages);
  const std::vector<std::string>& messages() const noexcept { return messages_; }

 private:
  std::vector<std::string> messages_;
};

enum class ProblemKind { Benchmark, Custom };

struct OutputOptions {
  std::filesystem::path directory = "bssn_output";
  bool csv = true;
  bool vtk = true;
  bool report = true;
  double tol_sigma = 1e-8;
};

struct VerifyOptions {
  bool enabled = true;
  int level = 4;
  int directions = 5;
  std::uint64_t seed = 20240607;
  /// Empty selects default_gradient_steps(problem).
  std::vector<double> gradient_steps;
  std::vector<double> hessian_steps{4e-1, 2e-1, 1e-1, 5e-2};
  double min_order = 1.9;
  double symmetry_tol = 1e-10;
};

struct RunConfig {
  std::filesystem::path source;
  ProblemKind kind = ProblemKind::Benchmark;
  TrackingForm tracking = TrackingForm::Quadratic;
  ProblemSpec problem;
  std::vector<int> levels;
  /// cfg.u0 stays empty; the initial control comes from `initial_control`.
  SsnConfig solver;
  /// Initial control as a function of x1, x2. Absent means zero.
  std::optional<Expression> initial_control;
  OutputOptions output;
  VerifyOptions verify;
};

/// Reads and validates a config file. Throws ConfigError for a missing
/// file and ConfigDiagnostics listing every violation otherwise.
/// Relative output directories are resolved against the file's directory.
RunConfig parse_config(const std::filesystem::path& path);

/// Same, from text already in memory; `name` labels the diagnostics and
/// `base_dir` resolves relative output directories.
RunConfig parse_config_text(const std::string& text, const std::string& name,
                            const std::filesystem::path& base_dir = {});

/// Nodal values of the configured initial control on `mesh`.
NodalField initial_control(const RunConfig& cfg, const TriMesh& mesh);

}  // namespace bssn
