#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "relcond/builtins.hpp"
#include "relcond/solvers.hpp"

namespace relcond {

enum ExitCode : int {
  kExitOk = 0,
  kExitOther = 1,
  kExitParse = 2,
  kExitPrecondition = 3,
  kExitEnvelope = 4,
  kExitMismatch = 5,
};

struct CommandOptions {
  std::string problem;
  std::string builtin;
  std::string out_dir = ".";
  /// Solver for the solve command: mirror, fw or fwa (defaults to the builtin's, else mirror).
  std::string algorithm;
  /// Inputs of the verify command; defaults are trace.csv and report.json inside out_dir.
  std::string trace;
  std::string report;
  /// Envelope to check; empty selects the one recorded in the trace metadata.
  std::string check;
  unsigned seed = 0;
  int samples = 2000;
  int iters = 500;
  std::optional<double> delta;
};

/// Loads the problem named by --problem or --builtin.
Problem load_problem(const CommandOptions& opts);

/// Writes report.json. Returns an exit code.
int cmd_analyze(const CommandOptions& opts, std::ostream& log);

/// Writes trace.csv, trace.csv.json and the constants used to report.json.
int cmd_solve(const CommandOptions& opts, std::ostream& log);

/// Writes verification.json; exits 4 on an envelope violation.
int cmd_verify(const CommandOptions& opts, std::ostream& log);

/// Runs the builtin end to end, writes reproduce.json and exits 5 on a mismatch.
int cmd_reproduce(const CommandOptions& opts, std::ostream& log);

/// Computed values for a builtin keyed as in its expectations.
json reproduce_values(const Builtin& b, const CommandOptions& opts);

}  // namespace relcond
