#include "meshfree/io/config.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "meshfree/core/errors.hpp"

#ifndef MESHFREE_VERSION
#define MESHFREE_VERSION "unknown"
#endif

namespace meshfree {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

template <class T>
T read_scalar(const YAML::Node& node, const std::string& key) {
  if (!node.IsScalar()) throw ConfigError(key + ": expected a scalar value");
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError(key + ": cannot read '" + node.Scalar() + "' as the expected type");
  }
}

/// Rejects keys of `map` outside `allowed`, naming the full key path.
void check_keys(const YAML::Node& map, const std::string& prefix, const std::set<std::string>& allowed) {
  if (!map.IsMap()) throw ConfigError((prefix.empty() ? std::string("config") : prefix) + ": expected a mapping");
  for (const auto& kv : map) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.contains(key)) {
      throw ConfigError("unknown key '" + (prefix.empty() ? key : prefix + "." + key) + "'");
    }
  }
}

// Key/value items of one engine spec entry, e.g. "phs k=5" -> head "phs", {k: 5}.
struct SpecItem {
  std::vector<std::string> words;
  std::map<std::string, std::string> values;
};

SpecItem split_item(const std::string& item) {
  SpecItem out;
  std::stringstream ss(item);
  std::string tok;
  while (ss >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) {
      out.words.push_back(tok);
    } else {
      out.values[tok.substr(0, eq)] = tok.substr(eq + 1);
    }
  }
  return out;
}

double spec_number(const SpecItem& item, const std::string& key, const std::string& text) {
  const auto it = item.values.find(key);
  if (it == item.values.end()) throw ConfigError("engine spec '" + text + "': missing " + key + "=");
  try {
    std::size_t used = 0;
    const double v = std::stod(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("engine spec '" + text + "': bad value " + key + "=" + it->second);
  }
}

int spec_int(const SpecItem& item, const std::string& key, const std::string& text) {
  const double v = spec_number(item, key, text);
  if (v != static_cast<int>(v)) throw ConfigError("engine spec '" + text + "': " + key + " must be an integer");
  return static_cast<int>(v);
}

std::optional<Rbf> spec_rbf(const SpecItem& item, const std::string& text) {
  if (item.words.empty()) return std::nullopt;
  const auto& w = item.words.front();
  if (w == "phs") return Polyharmonic{spec_int(item, "k", text)};
  if (w == "gaussian") return Gaussian{spec_number(item, "sigma", text)};
  if (w == "mq") return Multiquadric{spec_number(item, "sigma", text)};
  if (w == "imq") return InverseMultiquadric{spec_number(item, "sigma", text)};
  return std::nullopt;
}

Scale spec_scale(const std::string& v, const std::string& text) {
  if (v == "none") return Scale::none;
  if (v == "nearest") return Scale::nearest_neighbor;
  if (v == "support") return Scale::support_radius;
  throw ConfigError("engine spec '" + text + "': scale must be none, nearest or support");
}

DenseSolver spec_solver(const std::string& v, const std::string& text) {
  if (v == "lu") return DenseSolver::lu;
  if (v == "qr") return DenseSolver::qr;
  if (v == "svd") return DenseSolver::svd;
  throw ConfigError("engine spec '" + text + "': solver must be lu, qr or svd");
}

std::string default_engine(const std::string& experiment, int dim) {
  if (experiment == "convdiff3d") return "rbffd, phs k=3, m=2, n=35";
  if (experiment == "heat2d") return "rbffd, phs k=3, m=2, n=12";
  return dim == 3 ? "rbffd, phs k=3, m=2, n=35" : "rbffd, phs k=3, m=2, n=9";
}

}  // namespace

bool experiment_is_stochastic(const std::string& experiment) { return experiment != "approx-convergence"; }

template <int Dim>
ApproxSetup<Dim> parse_engine_spec(const std::string& text) {
  std::vector<std::string> items;
  {
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) items.push_back(trim(item));
  }
  if (items.empty() || items.front().empty()) throw ConfigError("empty engine spec");
  const std::string kind = items.front();
  if (kind != "rbffd" && kind != "gwls") {
    throw ConfigError("engine spec '" + text + "': engine must be rbffd or gwls, got '" + kind + "'");
  }

  std::optional<Rbf> rbf;
  std::optional<Monomials<Dim>> monomials;
  WeightFunction weight = ConstantWeight{};
  int augmentation = 2;
  Scale scale = Scale::support_radius;
  DenseSolver solver = DenseSolver::qr;
  int n = 0;

  for (std::size_t i = 1; i < items.size(); ++i) {
    const auto item = split_item(items[i]);
    if (item.words.empty() && item.values.size() == 1) {
      const auto& [key, value] = *item.values.begin();
      if (key == "n") {
        n = spec_int(item, "n", text);
      } else if (key == "m" && kind == "rbffd") {
        augmentation = value == "none" ? -1 : spec_int(item, "m", text);
      } else if (key == "scale") {
        scale = spec_scale(value, text);
      } else if (key == "solver") {
        solver = spec_solver(value, text);
      } else if (key == "weight" && value == "const") {
        weight = ConstantWeight{};
      } else {
        throw ConfigError("engine spec '" + text + "': unknown item '" + items[i] + "'");
      }
    } else if (!item.words.empty() && item.words.front() == "weight" && kind == "gwls") {
      if (item.words.size() != 2 || item.words[1] != "gaussian") {
        throw ConfigError("engine spec '" + text + "': weight must be 'weight=const' or 'weight gaussian sigma=S'");
      }
      weight = GaussianWeight{spec_number(item, "sigma", text)};
    } else if (!item.words.empty() && item.words.front() == "monomials" && kind == "gwls") {
      const int deg = spec_int(item, "deg", text);
      const bool no_mixed = item.words.size() == 2 && item.words[1] == "nomixed";
      if (item.words.size() > 2 || (item.words.size() == 2 && !no_mixed)) {
        throw ConfigError("engine spec '" + text + "': unknown monomials option in '" + items[i] + "'");
      }
      monomials = no_mixed ? Monomials<Dim>::without_mixed(deg) : Monomials<Dim>(deg);
    } else if (auto r = spec_rbf(item, text); r && item.words.size() == 1) {
      rbf = *r;
    } else {
      throw ConfigError("engine spec '" + text + "': unknown item '" + items[i] + "'");
    }
  }
  if (n < 1) throw ConfigError("engine spec '" + text + "': stencil size n= is required and must be positive");

  if (rbf) validate(*rbf);
  if (augmentation < -1) throw ConfigError("engine spec '" + text + "': m must be >= -1 (or none)");
  if (const auto* gw = std::get_if<GaussianWeight>(&weight); gw && !(gw->sigma > 0.0)) {
    throw ConfigError("engine spec '" + text + "': weight sigma must be positive");
  }

  ApproxSetup<Dim> setup{text, RBFFD<Dim>{}, n};
  if (kind == "rbffd") {
    if (monomials) throw ConfigError("engine spec '" + text + "': monomials belong to gwls");
    setup.engine = RBFFD<Dim>{rbf.value_or(Polyharmonic{3}), augmentation, scale, solver};
  } else {
    if (rbf && monomials) throw ConfigError("engine spec '" + text + "': gwls takes one basis");
    GWLS<Dim> g;
    if (rbf) {
      g.basis = *rbf;
    } else if (monomials) {
      g.basis = *monomials;
    }
    g.weight = weight;
    g.scale = scale;
    g.solver = solver;
    setup.engine = g;
  }
  if (setup.stencil_size < min_support_size(setup.engine)) {
    throw ConfigError("engine spec '" + text + "': n = " + std::to_string(n) + " is below the minimum of " +
                      std::to_string(min_support_size(setup.engine)));
  }
  return setup;
}

RunConfig parse_run_config(const std::string& text, const std::string& source, const ConfigOverrides& overrides) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(source + ": " + e.what());
  }
  if (!root || root.IsNull()) throw ConfigError(source + ": empty config");
  check_keys(root, "", {"run", "geometry", "engine", "solver", "time", "output", "versions"});

  RunConfig c;
  const auto run = root["run"];
  if (!run) throw ConfigError("missing required key 'run'");
  check_keys(run, "run", {"experiment", "dim", "seed", "threads", "repetitions"});
  if (!run["experiment"]) throw ConfigError("missing required key 'run.experiment'");
  if (!run["dim"]) throw ConfigError("missing required key 'run.dim'");
  c.experiment = read_scalar<std::string>(run["experiment"], "run.experiment");
  c.dim = read_scalar<int>(run["dim"], "run.dim");
  if (run["seed"]) c.seed = read_scalar<std::uint64_t>(run["seed"], "run.seed");
  if (run["threads"]) c.threads = read_scalar<int>(run["threads"], "run.threads");
  if (run["repetitions"]) c.repetitions = read_scalar<int>(run["repetitions"], "run.repetitions");

  if (const auto g = root["geometry"]) {
    check_keys(g, "geometry", {"h", "spacings"});
    if (g["h"]) c.h = read_scalar<double>(g["h"], "geometry.h");
    if (const auto s = g["spacings"]) {
      if (!s.IsSequence()) throw ConfigError("geometry.spacings: expected a list");
      for (std::size_t i = 0; i < s.size(); ++i)
        c.spacings.push_back(read_scalar<double>(s[i], "geometry.spacings[" + std::to_string(i) + "]"));
    }
  }
  if (const auto e = root["engine"]) c.engine = read_scalar<std::string>(e, "engine");
  if (const auto s = root["solver"]) {
    check_keys(s, "solver", {"method", "preconditioner", "fill", "drop", "tol", "max_iter"});
    if (s["method"] && read_scalar<std::string>(s["method"], "solver.method") != "bicgstab") {
      throw ConfigError("solver.method: only bicgstab is available");
    }
    if (s["preconditioner"]) {
      const auto p = read_scalar<std::string>(s["preconditioner"], "solver.preconditioner");
      if (p == "ilut") {
        c.solver.preconditioner = SparseSolverConfig::Preconditioner::ilut;
      } else if (p == "none") {
        c.solver.preconditioner = SparseSolverConfig::Preconditioner::none;
      } else {
        throw ConfigError("solver.preconditioner: expected ilut or none, got '" + p + "'");
      }
    }
    if (s["fill"]) c.solver.fill = read_scalar<int>(s["fill"], "solver.fill");
    if (s["drop"]) c.solver.drop = read_scalar<double>(s["drop"], "solver.drop");
    if (s["tol"]) c.solver.tol = read_scalar<double>(s["tol"], "solver.tol");
    if (s["max_iter"]) c.solver.max_iter = read_scalar<int>(s["max_iter"], "solver.max_iter");
  }
  if (const auto t = root["time"]) {
    check_keys(t, "time", {"dt_factor", "end_time"});
    if (t["dt_factor"]) c.dt_factor = read_scalar<double>(t["dt_factor"], "time.dt_factor");
    if (t["end_time"]) c.end_time = read_scalar<double>(t["end_time"], "time.end_time");
  }
  if (const auto o = root["output"]) {
    check_keys(o, "output", {"dir"});
    if (o["dir"]) c.out_dir = read_scalar<std::string>(o["dir"], "output.dir");
  }

  if (overrides.dim) c.dim = *overrides.dim;
  if (overrides.seed) c.seed = *overrides.seed;
  if (overrides.out_dir) c.out_dir = *overrides.out_dir;
  resolve_defaults(c);
  return c;
}

RunConfig read_run_config(const std::filesystem::path& path, const ConfigOverrides& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_run_config(ss.str(), path.string(), overrides);
}

void resolve_defaults(RunConfig& c) {
  const auto& e = c.experiment;
  if (std::find(experiment_names().begin(), experiment_names().end(), e) == experiment_names().end()) {
    throw ConfigError("run.experiment: unknown experiment '" + e + "'");
  }
  if (experiment_is_stochastic(e) && !c.seed) {
    throw ConfigError("missing required key 'run.seed' (" + e + " places nodes randomly)");
  }
  if (e == "heat2d" && c.dim != 2) throw ConfigError("run.dim: heat2d is two-dimensional");
  if (e == "convdiff3d" && c.dim != 3) throw ConfigError("run.dim: convdiff3d is three-dimensional");
  if (e == "approx-convergence" && c.dim != 2) throw ConfigError("run.dim: approx-convergence is two-dimensional");
  if (c.dim != 2 && c.dim != 3) throw ConfigError("run.dim: expected 2 or 3");
  if (c.threads < 0) throw ConfigError("run.threads: must be nonnegative");
  if (c.repetitions < 1) throw ConfigError("run.repetitions: must be at least 1");

  if (!c.h) {
    if (e == "heat2d") c.h = 0.042;
    if (e == "convdiff3d") c.h = 0.07;
    if (e == "fill-demo") c.h = c.dim == 2 ? 0.02 : 0.06;
  }
  if (c.spacings.empty()) {
    if (e == "approx-convergence") c.spacings = {0.1, 0.05, 0.025, 0.0125, 0.00625};
    if (e == "poisson-bench") {
      c.spacings = c.dim == 2 ? std::vector<double>{0.08, 0.04, 0.02, 0.01}
                              : std::vector<double>{0.2, 0.14, 0.1, 0.07, 0.05};
    }
  }
  if (c.h && !(*c.h > 0.0)) throw ConfigError("geometry.h: must be positive");
  for (double s : c.spacings)
    if (!(s > 0.0)) throw ConfigError("geometry.spacings: values must be positive");
  if (c.engine.empty() && e != "approx-convergence" && e != "fill-demo") c.engine = default_engine(e, c.dim);
  if (!c.engine.empty()) {
    if (c.dim == 2) {
      parse_engine_spec<2>(c.engine);
    } else {
      parse_engine_spec<3>(c.engine);
    }
  }
  try {
    c.solver.validate();
  } catch (const ConfigError& err) {
    throw ConfigError(std::string("solver: ") + err.what());
  }
  if (!(c.dt_factor > 0.0)) throw ConfigError("time.dt_factor: must be positive");
  if (!(c.end_time > 0.0)) throw ConfigError("time.end_time: must be positive");
}

void write_manifest(std::ostream& out, const RunConfig& c) {
  YAML::Emitter y;
  y.SetDoublePrecision(17);
  y << YAML::BeginMap;
  y << YAML::Key << "run" << YAML::Value << YAML::BeginMap;
  y << YAML::Key << "experiment" << YAML::Value << c.experiment;
  y << YAML::Key << "dim" << YAML::Value << c.dim;
  if (c.seed) y << YAML::Key << "seed" << YAML::Value << *c.seed;
  y << YAML::Key << "threads" << YAML::Value << c.threads;
  y << YAML::Key << "repetitions" << YAML::Value << c.repetitions;
  y << YAML::EndMap;
  if (c.h || !c.spacings.empty()) {
    y << YAML::Key << "geometry" << YAML::Value << YAML::BeginMap;
    if (c.h) y << YAML::Key << "h" << YAML::Value << *c.h;
    if (!c.spacings.empty()) y << YAML::Key << "spacings" << YAML::Value << YAML::Flow << c.spacings;
    y << YAML::EndMap;
  }
  if (!c.engine.empty()) y << YAML::Key << "engine" << YAML::Value << c.engine;
  y << YAML::Key << "solver" << YAML::Value << YAML::BeginMap;
  y << YAML::Key << "method" << YAML::Value << "bicgstab";
  y << YAML::Key << "preconditioner" << YAML::Value
    << (c.solver.preconditioner == SparseSolverConfig::Preconditioner::ilut ? "ilut" : "none");
  y << YAML::Key << "fill" << YAML::Value << c.solver.fill;
  y << YAML::Key << "drop" << YAML::Value << c.solver.drop;
  y << YAML::Key << "tol" << YAML::Value << c.solver.tol;
  y << YAML::Key << "max_iter" << YAML::Value << c.solver.max_iter;
  y << YAML::EndMap;
  y << YAML::Key << "time" << YAML::Value << YAML::BeginMap;
  y << YAML::Key << "dt_factor" << YAML::Value << c.dt_factor;
  y << YAML::Key << "end_time" << YAML::Value << c.end_time;
  y << YAML::EndMap;
  if (!c.out_dir.empty()) {
    y << YAML::Key << "output" << YAML::Value << YAML::BeginMap;
    y << YAML::Key << "dir" << YAML::Value << c.out_dir;
    y << YAML::EndMap;
  }
  y << YAML::Key << "versions" << YAML::Value << YAML::BeginMap;
  y << YAML::Key << "meshfree" << YAML::Value << MESHFREE_VERSION;
  y << YAML::Key << "eigen" << YAML::Value
    << (std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
        std::to_string(EIGEN_MINOR_VERSION));
  y << YAML::Key << "compiler" << YAML::Value << __VERSION__;
  y << YAML::EndMap;
  y << YAML::EndMap;
  out << y.c_str() << '\n';
}

template ApproxSetup<2> parse_engine_spec<2>(const std::string&);
template ApproxSetup<3> parse_engine_spec<3>(const std::string&);

}  // namespace meshfree
