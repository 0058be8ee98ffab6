#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace bssn {

/// Invalid user input: mesh level, coefficients, config keys.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A linear or nonlinear solve failed. Carries the residual history when one exists.
class SolverError : public std::runtime_error {
 public:
  explicit SolverError(const std::string& what, std::vector<double> history = {})
      : std::runtime_error(what), history_(std::move(history)) {}

  const std::vector<double>& residual_history() const noexcept { return history_; }

 private:
  std::vector<double> history_;
};

}  // namespace bssn
