#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "cli/config.hpp"

namespace saext::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitValidation = 2,
  kExitConditioning = 3,
  kExitEigensolver = 4,
  kExitIo = 5,
};

struct RunContext {
  std::filesystem::path out_dir = ".";
  int threads = 1;
  std::ostream* log = nullptr;
};

/// spectrum.csv (index, lambda, residual) and, if asked,
/// eigenfunction_<k>.csv (interval, x, re, im).
void cmd_solve(const JobConfig& config, const RunContext& ctx);
/// roots.csv (index, lambda, multiplicity) and, if asked, scan.csv
/// (lambda, abs, re, im).
void cmd_oracle(const JobConfig& config, const RunContext& ctx);
/// convergence.csv (N, h1_error, eigenvalue, eigenvalue_error) with fit footers.
void cmd_convergence(const JobConfig& config, const RunContext& ctx);
/// stability.csv (epsilon, level, lambda0, lambda, K, status, ...) with fit footers.
void cmd_stability(const JobConfig& config, const RunContext& ctx);
/// condition.csv (N, kappa, bound, spectrum_gap, compatible).
void cmd_condition(const JobConfig& config, const RunContext& ctx);

/// Creates the output directory, writes config.resolved.yaml, runs the named
/// command and maps library exceptions to exit codes. Diagnostics go to err.
int run_command(const std::string& name, const JobConfig& config, const RunContext& ctx, std::ostream& err);

/// SAEXT_THREADS if set and positive, else the hardware concurrency.
int worker_count();

}  // namespace saext::cli
