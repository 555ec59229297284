#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "osg/config.hpp"
#include "osg/error.hpp"

namespace osg {

enum ExitCode : int {
  kExitOk = 0,
  kExitOracleFail = 1,
  kExitConfig = 2,
  kExitBudget = 3,
  kExitIo = 4,
  kExitInfeasible = 5,
};

int exit_code_for(ErrorKind kind);

/// Command-line overrides applied on top of the config file.
struct CommandOptions {
  std::optional<std::string> out_dir;
  std::optional<OutputFormat> format;
  std::optional<int> threads;
  std::optional<double> exclusion_radius;
  bool verify = false;
};

/// Config with the overrides folded in; throws Error(Config) on invalid overrides.
RunConfig apply_overrides(RunConfig config, const CommandOptions& options);

// Each command writes its report to `out` (and next to the outputs), returning an exit code.
// Errors propagate as osg::Error; the CLI maps them through exit_code_for.
int run_simulate(const RunConfig& config, std::ostream& out);
int run_target(const RunConfig& config, bool verify, std::ostream& out);
int run_oracle_check(const RunConfig& config, std::ostream& out);
int run_sweep(const RunConfig& config, bool verify, std::ostream& out);

/// Largest quadrature-suite cutoff oracle-check accepts.
inline constexpr int kOracleMaxN = 8;

}  // namespace osg
