#include "meshfree/io/cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "meshfree/core/errors.hpp"
#include "meshfree/geometry/shape.hpp"
#include "meshfree/io/csv.hpp"
#include "meshfree/pde/heat.hpp"
#include "meshfree/pde/scenarios.hpp"

namespace meshfree {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.precision(17);
  return out;
}

void run_approx_convergence(const RunConfig& c, const std::filesystem::path& dir, bool quiet, std::ostream& log) {
  std::vector<std::pair<std::string, ApproxSetup<2>>> setups;
  if (c.engine.empty()) {
    const auto standard = standard_approx_setups<2>();
    for (std::size_t k = 0; k < standard.size(); ++k) setups.emplace_back(std::to_string(k + 1), standard[k]);
  } else {
    setups.emplace_back("custom", parse_engine_spec<2>(c.engine));
  }
  auto out = open_out(dir / "approx_convergence.csv");
  out << "setup,h,e_h\n";
  for (const auto& [label, setup] : setups) {
    std::vector<double> errors;
    for (double h : c.spacings) {
      errors.push_back(laplacian_grid_error(setup, h, c.threads));
      out << label << ',' << h << ',' << errors.back() << '\n';
    }
    if (!quiet && errors.size() > 1) {
      log << "setup " << label << " (" << setup.name << "): observed order " << fit_slope(c.spacings, errors)
          << ", smallest error " << *std::min_element(errors.begin(), errors.end()) << '\n';
    }
  }
  if (!out) throw IoError("failed writing approx_convergence.csv");
}

template <int Dim>
void run_poisson_bench(const RunConfig& c, const std::filesystem::path& dir, bool quiet, std::ostream& log) {
  const auto setup = parse_engine_spec<Dim>(c.engine);
  PoissonBenchmark<Dim> bench;
  bench.engine = setup.engine;
  bench.stencil_size = setup.stencil_size;
  bench.solver = c.solver;
  bench.seed = *c.seed;
  bench.threads = c.threads;
  const auto records = convergence_study(
      [&](double h) {
        auto r = run_poisson_benchmark(bench, h);
        if (!quiet) log << "h = " << h << ": N = " << r.N << ", e_inf = " << r.e_inf << '\n';
        return r;
      },
      c.spacings, c.repetitions);
  write_records_csv(dir / "poisson_errors.csv", records, false);
  write_records_csv(dir / "poisson_records.csv", records, true);
  if (!quiet && records.size() > 1) log << "observed order " << fit_order(records, Dim) << '\n';
}

void run_heat2d_experiment(const RunConfig& c, const std::filesystem::path& dir, bool quiet, std::ostream& log) {
  const auto engine = parse_engine_spec<2>(c.engine);
  Heat2DSetup setup;
  setup.h = *c.h;
  setup.engine = engine.engine;
  setup.stencil_size = engine.stencil_size;
  setup.dt_factor = c.dt_factor;
  setup.end_time = c.end_time;
  setup.seed = *c.seed;
  setup.threads = c.threads;
  setup.solver = c.solver;
  const auto r = run_heat2d(setup);
  Eigen::MatrixXd field(r.domain.size(), 2);
  field.col(0) = r.explicit_u;
  field.col(1) = r.steady_u;
  write_nodes_csv(r.domain, dir / "heat2d_nodes.csv");
  write_field_csv(r.domain, field, dir / "heat2d_field.csv");
  auto out = open_out(dir / "heat2d_summary.csv");
  out << "N,dt,steps,last_change,e_inf\n"
      << r.domain.size() << ',' << r.dt << ',' << r.steps << ',' << r.last_change << ',' << r.e_inf << '\n';
  if (!quiet) {
    log << "N = " << r.domain.size() << ", dt = " << r.dt << ", steps = " << r.steps
        << ", max |explicit - steady| = " << r.e_inf << '\n';
  }
}

void run_convdiff3d_experiment(const RunConfig& c, const std::filesystem::path& dir, bool quiet,
                               std::ostream& log) {
  const auto engine = parse_engine_spec<3>(c.engine);
  ConvDiff3DSetup setup;
  setup.h = *c.h;
  setup.engine = engine.engine;
  setup.stencil_size = engine.stencil_size;
  setup.seed = *c.seed;
  setup.threads = c.threads;
  setup.solver = c.solver;
  const auto r = run_convdiff3d(setup);
  const auto& s = r.result.solve;
  if (!s.converged) throw NumericalError("convection-diffusion solve did not converge (residual " +
                                         std::to_string(s.residual) + ")");
  write_field_csv(r.domain, Eigen::MatrixXd(s.u), dir / "convdiff3d_field.csv");
  auto out = open_out(dir / "convdiff3d_summary.csv");
  out << "N,iterations,residual,u_max\n" << r.domain.size() << ',' << s.iterations << ',' << s.residual << ','
      << s.u.maxCoeff() << '\n';
  if (!quiet) {
    log << "N = " << r.domain.size() << ", iterations = " << s.iterations << ", residual = " << s.residual << '\n';
  }
}

template <int Dim>
void run_fill_demo(const RunConfig& c, const std::filesystem::path& dir, bool quiet, std::ostream& log) {
  const double h0 = *c.h;
  Shape<Dim> shape = Shape<Dim>::box(Vec<Dim>::Zero(), Vec<Dim>::Ones(), -1) -
                     Shape<Dim>::ball(Vec<Dim>::Constant(0.5), 0.2, -2);
  const SpacingFunction<Dim> h = [h0](const Vec<Dim>& p) { return h0 * (1.0 + p[0]); };
  const auto domain = shape.discretize(h, *c.seed);
  write_nodes_csv(domain, dir / "fill_nodes.csv");
  auto out = open_out(dir / "fill_summary.csv");
  out << "N,boundary,min_distance\n"
      << domain.size() << ',' << domain.boundary().size() << ',' << min_node_distance(domain) << '\n';
  if (!quiet) log << "N = " << domain.size() << " (" << domain.boundary().size() << " on the boundary)\n";
}

}  // namespace

void run_experiment(const RunConfig& config, const std::filesystem::path& out_dir, bool quiet, std::ostream& log) {
  RunConfig c = config;
  resolve_defaults(c);
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create output directory " + out_dir.string() + ": " + ec.message());
  {
    auto manifest = open_out(out_dir / "manifest.yaml");
    write_manifest(manifest, c);
    if (!manifest) throw IoError("failed writing manifest.yaml");
  }
  const auto& e = c.experiment;
  if (e == "approx-convergence") {
    run_approx_convergence(c, out_dir, quiet, log);
  } else if (e == "poisson-bench") {
    c.dim == 2 ? run_poisson_bench<2>(c, out_dir, quiet, log) : run_poisson_bench<3>(c, out_dir, quiet, log);
  } else if (e == "heat2d") {
    run_heat2d_experiment(c, out_dir, quiet, log);
  } else if (e == "convdiff3d") {
    run_convdiff3d_experiment(c, out_dir, quiet, log);
  } else if (e == "fill-demo") {
    c.dim == 2 ? run_fill_demo<2>(c, out_dir, quiet, log) : run_fill_demo<3>(c, out_dir, quiet, log);
  }
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Meshfree PDE experiments"};
  app.require_subcommand(1);
  std::string config_path, out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> dim;
  bool quiet = false;
  for (const auto& name : experiment_names()) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "YAML run configuration");
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--seed", seed, "random seed");
    sub->add_option("--dim", dim, "dimension")->check(CLI::IsMember({2, 3}));
    sub->add_flag("--quiet", quiet, "suppress progress output");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_ok : exit_bad_config;
  }
  const std::string experiment = app.get_subcommands().front()->get_name();

  try {
    ConfigOverrides overrides{dim, seed, std::nullopt};
    if (!out_dir.empty()) overrides.out_dir = out_dir;
    RunConfig config;
    if (!config_path.empty()) {
      config = read_run_config(config_path, overrides);
      if (config.experiment != experiment) {
        throw ConfigError("config is for '" + config.experiment + "' but the command is '" + experiment + "'");
      }
    } else {
      config.experiment = experiment;
      config.dim = dim.value_or(experiment == "convdiff3d" ? 3 : 2);
      // Flag-only runs of stochastic experiments default to seed 1; the
      // manifest records it.
      if (experiment_is_stochastic(experiment)) config.seed = seed.value_or(1);
      if (overrides.out_dir) config.out_dir = *overrides.out_dir;
      resolve_defaults(config);
    }
    const std::filesystem::path dir = config.out_dir.empty() ? std::filesystem::path(experiment + "-out")
                                                             : std::filesystem::path(config.out_dir);
    run_experiment(config, dir, quiet, out);
    if (!quiet) out << "wrote " << dir.string() << '\n';
    return exit_ok;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return exit_bad_config;
  } catch (const std::exception& e) {
    err << experiment << " failed: " << e.what() << '\n';
    return exit_failure;
  }
}

}  // namespace meshfree
