#pragma once
// Command-line entry point: flag/config-file parsing, command dispatch,
// alpha-scan drivers, and machine-readable JSON/CSV reports.
//
// Exit codes: 0 success/verified, 1 verification failure (FAILED
// certificate or inequality violation), 2 usage error, 3 numerical
// non-convergence.

#include "ral/core.hpp"
#include "ral/io.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace ral::cli {

struct RunConfig {
  std::string command;  // minimize | hessian | verify-tensor | check-phi-psi
                        // | scan-proposition | taylor-probe
                        // | channel-min-entropy
  double alpha = 2.0;
  std::uint64_t seed = 1;
  int restarts = opt::restarts;
  double tol_eig = tol::eig_classify_default;
  double tol_grad = opt::grad_tol;
  std::string grid;  // "lo:hi:step" alpha scan (scan-capable commands only)
  std::string input_path;
  std::string output_path;  // empty: report to stdout
  int threads = 0;          // 0: RAL_THREADS, else 1
};

struct Report {
  io::json doc;  // {command, config, results, wall_time_ms, version}
  int exit_code = 0;
};

// Flags override --config file values; returns nullopt when --help or
// --version was handled. Throws usage_error on bad input.
std::optional<RunConfig> parse_config(int argc, const char* const* argv);

// Validates command-specific preconditions and dispatches. Library errors
// propagate; main_impl maps them to exit codes.
Report run(const RunConfig& config);

// Repeats a scan-capable command per alpha in [lo, hi] stepped by `step`,
// aggregating per-alpha worst rows into one report with a CSV block.
Report scan_alpha(const RunConfig& config, double lo, double hi, double step);

// parse + run + write report; returns the process exit code.
int main_impl(int argc, const char* const* argv);

}  // namespace ral::cli
