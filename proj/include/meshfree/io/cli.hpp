#pragma once

#include <filesystem>
#include <iosfwd>

#include "meshfree/io/config.hpp"

namespace meshfree {

enum ExitCode : int { exit_ok = 0, exit_failure = 1, exit_bad_config = 2 };

/// Runs one resolved experiment and writes its CSVs and manifest.yaml to
/// `out_dir`. Progress goes to `log` unless `quiet`.
void run_experiment(const RunConfig& config, const std::filesystem::path& out_dir, bool quiet, std::ostream& log);

/// `meshfree <experiment> [--config f] [--out d] [--seed s] [--dim d] [--quiet]`.
/// Returns 0 on success, 1 on a numerical or I/O failure, 2 on a bad
/// command line or config.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace meshfree
