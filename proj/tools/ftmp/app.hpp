#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "ftmp/analysis.hpp"
#include "ftmp/settings.hpp"
#include "ftmp/sim.hpp"

namespace ftmp::app {

enum ExitCode : int { kOk = 0, kFailure = 1, kBadArguments = 2, kIoFailure = 3 };

/// Command-line entry point. `args` excludes the program name.
int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err);

/// $FTMP_OUT_DIR/<label>_seed<S> when the variable is set, ftmp_runs/<label>_seed<S> otherwise.
std::filesystem::path default_run_dir(const RunSettings& settings);

struct RunOutcome {
  TrajectoryRecord record;
  std::string digest;
  std::vector<std::string> outputs;
};

/// Simulates and writes every output file into `dir` (created if needed).
/// Throws ftmp::Error for invalid settings and std::runtime_error on I/O failure.
RunOutcome execute_run(const RunSettings& settings, const std::filesystem::path& dir);

/// Re-simulates a run directory and checks it against its own outputs. Throws
/// std::runtime_error when a required file is missing or unreadable.
std::vector<Finding> audit_run_dir(const std::filesystem::path& dir);

}  // namespace ftmp::app
