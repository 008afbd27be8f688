#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "meshfree/pde/convergence.hpp"
#include "meshfree/pde/solver.hpp"

namespace meshfree {

/// Names accepted for `run.experiment` and as CLI subcommands.
inline const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"approx-convergence", "heat2d", "convdiff3d", "poisson-bench",
                                              "fill-demo"};
  return names;
}

/// Everything but approx-convergence places nodes randomly.
bool experiment_is_stochastic(const std::string& experiment);

/// One experiment run. Empty or unset optional fields take the experiment's
/// defaults when the run starts (see resolve_defaults).
struct RunConfig {
  std::string experiment;
  int dim = 2;
  std::optional<std::uint64_t> seed;
  /// Cap on weight-computation threads, 0 defers to MESHFREE_THREADS.
  int threads = 0;
  int repetitions = 1;

  /// Spacing of single-resolution experiments.
  std::optional<double> h;
  /// Resolution list of the convergence experiments.
  std::vector<double> spacings;

  /// Engine spec, e.g. `rbffd, phs k=5, m=2, n=12`.
  std::string engine;
  SparseSolverConfig solver;

  /// heat2d: dt = dt_factor * h_min^2 / 4, run until end_time.
  double dt_factor = 0.5;
  double end_time = 6.0;

  std::string out_dir;
};

/// Command-line values that replace the file's before defaults are resolved.
struct ConfigOverrides {
  std::optional<int> dim;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
};

/// Parses and validates a YAML run configuration. Errors are ConfigError
/// naming the offending key path.
RunConfig parse_run_config(const std::string& text, const std::string& source = "<string>",
                           const ConfigOverrides& overrides = {});
RunConfig read_run_config(const std::filesystem::path& path, const ConfigOverrides& overrides = {});

/// Fills the documented per-experiment defaults and validates the result,
/// including the seed requirement of stochastic experiments.
void resolve_defaults(RunConfig& config);

/// Writes the config in the format parse_run_config reads, followed by a
/// `versions` section.
void write_manifest(std::ostream& out, const RunConfig& config);

/// Parses an engine spec such as `rbffd, phs k=5, m=2, n=12` or
/// `gwls, monomials deg=2 nomixed, weight gaussian sigma=1, scale=nearest, solver=svd, n=9`.
template <int Dim>
ApproxSetup<Dim> parse_engine_spec(const std::string& text);

}  // namespace meshfree
