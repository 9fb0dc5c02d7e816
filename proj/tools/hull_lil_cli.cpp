// hull_lil: command line front end for the simulation, variational, LIL and
// verification drivers.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "hull_lil/error.hpp"
#include "hull_lil/func.hpp"
#include "hull_lil/geom.hpp"
#include "hull_lil/io.hpp"
#include "hull_lil/lil.hpp"
#include "hull_lil/parallel.hpp"
#include "hull_lil/varopt.hpp"
#include "hull_lil/verify.hpp"
#include "hull_lil/walk.hpp"

using json = nlohmann::json;
using namespace hull_lil;

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kFlagged = 2;

const std::vector<std::string> kCommands = {"simulate", "variational", "lil", "verify"};

std::string join_path(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).generic_string();
}

void prepare_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory " + dir);
}

void write_json(const std::string& path, const json& doc) { io::write_file(path, doc.dump(2) + "\n"); }

json to_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

json to_json(const Eigen::MatrixXd& m) {
  json a = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) a.push_back(to_json(Eigen::VectorXd(m.row(i).transpose())));
  return a;
}

// Turns a flat JSON object into flag tokens: scalars become "--key value",
// arrays become comma lists and true booleans become bare flags.
std::vector<std::string> config_tokens(const std::string& path, std::string& command) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read config file " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(std::string("invalid config file: ") + e.what());
  }
  if (!doc.is_object()) throw Error("config file must hold a JSON object");
  std::vector<std::string> tokens;
  auto scalar = [](const json& v) -> std::string {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer() || v.is_number_unsigned()) return v.dump();
    if (v.is_number_float()) return io::format_double(v.get<double>());
    throw Error("config values must be strings, numbers, booleans or arrays of numbers");
  };
  for (const auto& [key, value] : doc.items()) {
    if (key == "command") {
      command = scalar(value);
      continue;
    }
    if (value.is_boolean()) {
      if (value.get<bool>()) tokens.push_back("--" + key);
      continue;
    }
    tokens.push_back("--" + key);
    if (value.is_array()) {
      std::string list;
      for (const auto& item : value) list += (list.empty() ? "" : ",") + scalar(item);
      tokens.push_back(list);
    } else {
      tokens.push_back(scalar(value));
    }
  }
  return tokens;
}

// Splices `--config path` into the argument list right after the subcommand,
// so flags given on the command line come later and win.
std::vector<std::string> expand_config(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
      break;
    }
  }
  if (path.empty()) return args;
  std::string command;
  const auto tokens = config_tokens(path, command);
  auto at = std::find_if(args.begin(), args.end(), [](const std::string& a) {
    return std::find(kCommands.begin(), kCommands.end(), a) != kCommands.end();
  });
  if (at == args.end()) {
    if (command.empty()) throw Error("no subcommand given on the command line or in the config file");
    args.insert(args.begin(), command);
    at = args.begin();
  }
  args.insert(at + 1, tokens.begin(), tokens.end());
  return args;
}

struct ModelArgs {
  std::string kind = "gaussian";
  std::string drift;
  std::string sigma = "I";
  int dim = 2;
  bool zero_drift = false;

  void add(CLI::App* cmd) {
    cmd->add_option("--model", kind, "Increment law: gaussian, rademacher-lattice, uniform-ball");
    cmd->add_option("--drift", drift, "Drift vector, comma separated");
    cmd->add_option("--sigma", sigma, "Covariance: I or a row-major comma list");
    cmd->add_option("--dim", dim, "Dimension when neither drift nor sigma fixes it")->check(CLI::Range(1, 64));
    cmd->add_flag("--zero-drift", zero_drift, "Centred increments");
  }

  walk::IncrementModel build() const {
    Eigen::VectorXd mu;
    if (!drift.empty()) {
      mu = io::parse_vector(drift);
    } else {
      int d = dim;
      if (sigma != "I") {
        const auto n = io::parse_list(sigma).size();
        d = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
      }
      if (!zero_drift) throw Error("--drift is required unless --zero-drift is given");
      mu = Eigen::VectorXd::Zero(d);
    }
    if (zero_drift && mu.norm() != 0.0) throw Error("--zero-drift contradicts a nonzero --drift");
    const int d = static_cast<int>(mu.size());
    switch (walk::parse_increment_kind(kind)) {
      case walk::IncrementKind::gaussian:
        return walk::IncrementModel::gaussian(mu, io::parse_matrix(sigma, d));
      case walk::IncrementKind::rademacher_lattice:
        return walk::IncrementModel::rademacher_lattice(mu);
      case walk::IncrementKind::uniform_ball:
        return walk::IncrementModel::uniform_ball(mu);
    }
    throw Error("unknown increment law");
  }
};

json model_json(const walk::IncrementModel& m) {
  return {{"model", walk::to_string(m.kind())},
          {"dim", m.dim()},
          {"drift", to_json(m.drift())},
          {"sigma", to_json(m.covariance())}};
}

// ---- simulate ----

struct SimulateArgs {
  ModelArgs model;
  std::size_t steps = 10000;
  std::uint64_t seed = 1;
  std::uint64_t stream = 0;
  std::string out_dir = ".";
};

int cmd_simulate(const SimulateArgs& a) {
  const auto model = a.model.build();
  const auto path = walk::generate_walk(model, a.steps, a.seed, a.stream);
  prepare_dir(a.out_dir);
  const std::string csv = join_path(a.out_dir, "walk.csv");
  std::ostringstream out;
  walk::write_csv(path, out);
  io::write_file(csv, out.str());

  const int d = path.dim();
  const auto com = walk::centre_of_mass(path);
  const auto end = path.point(path.steps());
  json doc = model_json(model);
  doc["steps"] = a.steps;
  doc["seed"] = a.seed;
  doc["stream"] = a.stream;
  doc["endpoint"] = std::vector<double>(end.begin(), end.end());
  doc["centre_of_mass"] = std::vector<double>(com.end() - d, com.end());
  if (d == 2) {
    const auto pts = path.points_2d();
    const auto hull = geom::convex_hull_2d(pts);
    doc["hull"] = {{"vertices", hull.vertices().size()},
                   {"area", hull.area()},
                   {"perimeter", hull.perimeter()},
                   {"diameter", hull.diameter()}};
  } else if (d == 3) {
    std::vector<geom::Point3> pts(path.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const auto p = path.point(i);
      pts[i] = {p[0], p[1], p[2]};
    }
    const geom::ConvexHull3d hull(pts);
    doc["hull"] = {{"vertices", hull.vertices().size()}, {"volume", hull.volume()}, {"diameter", hull.diameter()}};
  }
  doc["path_csv_path"] = csv;
  write_json(join_path(a.out_dir, "walk.json"), doc);
  std::cout << doc.dump(2) << "\n";
  return kOk;
}

// ---- variational ----

struct VariationalArgs {
  std::string problem;
  varopt::OptimizerConfig config;
  std::string init = "random";
  std::size_t threads = 0;
  double a_min = 3.5;
  double a_max = 4.5;
  double a_step = 0.001;
  std::string a_list;
  double x = 1.0;
  double gamma = 1.0;
  double verify_tolerance = 1e-4;
  std::string out_dir = ".";
  bool grid_given = false;
};

varopt::Init parse_init(const std::string& name) {
  if (name == "random") return varopt::Init::random;
  if (name == "f-star") return varopt::Init::f_star;
  if (name == "f-a") return varopt::Init::f_a;
  if (name == "semicircle") return varopt::Init::semicircle;
  throw Error("unknown initialization: " + name);
}

std::vector<double> family_grid(const VariationalArgs& a) {
  if (!a.a_list.empty()) return io::parse_list(a.a_list);
  if (!(a.a_step > 0.0) || !(a.a_max >= a.a_min)) throw Error("invalid a range");
  const auto count = static_cast<std::size_t>(std::floor((a.a_max - a.a_min) / a.a_step + 1e-9)) + 1;
  std::vector<double> values(count);
  for (std::size_t i = 0; i < count; ++i) values[i] = a.a_min + static_cast<double>(i) * a.a_step;
  return values;
}

json result_json(const varopt::OptResult& r, const std::string& csv) {
  json trace = json::array();
  for (const auto& p : r.trace) trace.push_back({{"N", p.grid}, {"value", p.value}});
  json extras = json::object();
  for (const auto& [k, v] : r.extras) extras[k] = v;
  return {{"problem", r.problem},     {"N", r.grid},
          {"restarts", r.restarts},   {"value", r.value},
          {"bound_type", "lower"},    {"certified", r.certified},
          {"converged", r.converged}, {"iterations", r.iterations},
          {"trace", trace},           {"argmax_csv_path", csv},
          {"extras", extras}};
}

int cmd_variational(VariationalArgs a) {
  a.config.threads = resolve_threads(a.threads);
  a.config.init = parse_init(a.init);
  varopt::OptResult result;
  if (a.problem == "lambda2") {
    result = varopt::maximize_area_drift(a.config);
  } else if (a.problem == "theta-ascent") {
    result = varopt::maximize_com_area(a.config);
  } else if (a.problem == "v2") {
    result = varopt::maximize_area_zero_drift(a.config);
  } else if (a.problem == "theta-family") {
    const std::size_t n = a.grid_given ? a.config.grid : 100000;
    result = varopt::theta_bound_from_family(family_grid(a), n, a.config.threads);
  } else if (a.problem == "verify-fstar") {
    const std::size_t n = a.grid_given ? a.config.grid : 2000;
    const auto rep = varopt::verify_planar_optimum(a.x, a.gamma, n, a.verify_tolerance);
    result.problem = "verify-fstar";
    result.grid = n;
    result.restarts = 1;
    result.value = rep.area_value;
    result.argmax = {func::f_star(a.x, a.gamma, n)};
    result.trace.push_back({n, rep.area_value});
    result.converged = rep.pass;
    result.certified = rep.pass;
    result.extras = {{"x", rep.x},
                     {"gamma", rep.gamma},
                     {"gamma_value", rep.gamma_value},
                     {"area_expected", rep.area_expected},
                     {"transform_error", rep.transform_error}};
  } else {
    throw CLI::ValidationError("--problem",
                               "unknown problem '" + a.problem +
                                   "' (lambda2, theta-family, theta-ascent, v2, verify-fstar)");
  }
  prepare_dir(a.out_dir);
  const std::string csv = join_path(a.out_dir, a.problem + "_argmax.csv");
  std::ostringstream out;
  varopt::write_argmax_csv(result, out);
  io::write_file(csv, out.str());
  const json doc = result_json(result, csv);
  write_json(join_path(a.out_dir, a.problem + ".json"), doc);
  std::cout << doc.dump(2) << "\n";
  if (!result.converged) {
    std::cerr << "warning: " << a.problem << " did not converge; best iterate reported\n";
    return kFlagged;
  }
  return kOk;
}

// ---- lil ----

struct LilArgs {
  ModelArgs model;
  std::string functional = "area";
  std::size_t n_max = 1000000;
  std::size_t replicas = 50;
  std::uint64_t first_replica = 0;
  std::size_t checkpoint_count = 20;
  std::string checkpoint_list;
  std::uint64_t seed = 1;
  std::size_t threads = 0;
  std::string out_dir = ".";
};

int cmd_lil(const LilArgs& a) {
  auto model = a.model.build();
  if (!a.model.zero_drift && !model.has_drift()) throw Error("drift regime requires a nonzero drift");
  const auto regime = a.model.zero_drift ? lil::Regime::zero_drift : lil::Regime::drift;
  const lil::LilSpec spec{lil::parse_functional(a.functional), regime, std::move(model)};
  spec.validate();

  std::vector<std::size_t> checkpoints;
  if (!a.checkpoint_list.empty()) {
    for (double v : io::parse_list(a.checkpoint_list)) {
      if (!(v >= 1.0) || v != std::floor(v)) throw Error("checkpoints must be positive integers");
      checkpoints.push_back(static_cast<std::size_t>(v));
    }
  } else {
    checkpoints = lil::default_checkpoints(a.n_max, a.checkpoint_count);
  }
  const auto trace = lil::estimate_limsup(spec, a.n_max, checkpoints, a.replicas, a.seed, resolve_threads(a.threads),
                                          a.first_replica);

  prepare_dir(a.out_dir);
  const std::string csv = join_path(a.out_dir, "lil_trace.csv");
  std::ostringstream out;
  lil::write_trace_csv(trace, out);
  io::write_file(csv, out.str());

  json spec_doc = model_json(spec.model);
  spec_doc["functional"] = lil::to_string(spec.functional);
  spec_doc["regime"] = lil::to_string(spec.regime);
  json merged = json::array();
  for (std::size_t i = 0; i < trace.checkpoints.size(); ++i)
    merged.push_back({{"n", trace.checkpoints[i]}, {"value", trace.merged[i]}});
  const auto constant = lil::theoretical_constant(spec);
  json doc = {{"spec", spec_doc},
              {"n_max", trace.checkpoints.empty() ? a.n_max : trace.checkpoints.back()},
              {"replicas", trace.replicas.size()},
              {"seed", a.seed},
              {"constant_theoretical", constant ? json(*constant) : json(nullptr)},
              {"merged_max_at", merged},
              {"trace_csv_path", csv}};
  write_json(join_path(a.out_dir, "lil_summary.json"), doc);
  std::cout << doc.dump(2) << "\n";
  return kOk;
}

// ---- verify ----

struct VerifyArgs {
  std::string suite;
  verify::VerifyOptions options;
  std::string stability_seeds;
  std::string out_dir = ".";
};

int cmd_verify(const VerifyArgs& a) {
  const auto names = verify::suite_names();
  if (std::find(names.begin(), names.end(), a.suite) == names.end())
    throw CLI::ValidationError("--suite", "unknown suite '" + a.suite + "' (steiner, lemmas-s5, scaling, stability)");
  const auto report = verify::run_suite(a.suite, a.options);
  verify::print_table(report, std::cout);

  prepare_dir(a.out_dir);
  json checks = json::array();
  for (const auto& c : report.checks)
    checks.push_back(
        {{"name", c.name}, {"cases", c.cases}, {"failures", c.failures}, {"worst", c.worst}, {"pass", c.pass()}});
  json doc = {{"suite", report.suite}, {"seed", a.options.seed}, {"pass", report.pass()}, {"checks", checks}};
  if (a.suite == "stability") doc["stability_seeds"] = a.options.stability_seeds;
  if (!report.radii.empty()) {
    const std::string csv = join_path(a.out_dir, a.suite + "_radii.csv");
    std::string text = "seed,n,max_radius\r\n";
    for (const auto& row : report.radii)
      text += std::to_string(row.seed) + "," + std::to_string(row.n) + "," + io::format_double(row.radius) + "\r\n";
    io::write_file(csv, text);
    doc["radii_csv_path"] = csv;
  }
  write_json(join_path(a.out_dir, "verify_" + a.suite + ".json"), doc);
  return report.pass() ? kOk : kFlagged;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Convex hulls of random walks: simulation, variational constants and LIL probes"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.set_version_flag("--version", "hull_lil 0.1.0");

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Generate one walk and report its hull");
  sim.model.add(simulate);
  simulate->add_option("--steps,-n", sim.steps, "Number of steps")->check(CLI::PositiveNumber);
  simulate->add_option("--seed", sim.seed, "Seed");
  simulate->add_option("--stream", sim.stream, "Stream index");
  simulate->add_option("--out-dir", sim.out_dir, "Output directory");

  VariationalArgs var;
  auto* variational = app.add_subcommand("variational", "Solve a discretized variational problem");
  variational->add_option("--problem", var.problem, "lambda2, theta-family, theta-ascent, v2, verify-fstar")
      ->required();
  auto* grid_opt = variational->add_option("--grid,-N", var.config.grid, "Cells per component");
  variational->add_option("--restarts", var.config.restarts, "Random starts");
  variational->add_option("--max-iterations", var.config.max_iterations, "Iteration cap per ascent");
  variational->add_option("--initial-step", var.config.initial_step, "Initial step (0: 0.1/sqrt(N))");
  variational->add_option("--step-growth", var.config.step_growth, "Step factor after an accepted step");
  variational->add_option("--step-decay", var.config.step_decay, "Step factor after a rejected step");
  variational->add_option("--tolerance", var.config.tolerance, "Improvement threshold");
  variational->add_option("--patience", var.config.patience, "Iterations without improvement before stopping");
  variational->add_option("--refinements", var.config.refinements, "Grid doublings after the base solve");
  variational->add_option("--coarse-grid", var.config.coarse_grid, "Grid on which random starts begin");
  variational->add_option("--reductions", var.config.reductions, "Rounds of hull reduction moves");
  variational->add_option("--seed", var.config.seed, "Seed");
  variational->add_option("--init", var.init, "random, f-star, f-a, semicircle");
  variational->add_option("--init-a", var.config.init_a, "Parameter a of the f-a start");
  variational->add_option("--a-min", var.a_min, "Family scan start");
  variational->add_option("--a-max", var.a_max, "Family scan end");
  variational->add_option("--a-step", var.a_step, "Family scan step");
  variational->add_option("--a", var.a_list, "Explicit family parameters, comma separated");
  variational->add_option("--x", var.x, "Interval length for verify-fstar");
  variational->add_option("--gamma", var.gamma, "Energy budget for verify-fstar");
  variational->add_option("--verify-tolerance", var.verify_tolerance, "Tolerance for verify-fstar");
  variational->add_option("--threads", var.threads, "Worker threads (default: HULL_LIL_THREADS or all cores)");
  variational->add_option("--out-dir", var.out_dir, "Output directory");

  LilArgs la;
  auto* lil_cmd = app.add_subcommand("lil", "Monte Carlo running maxima of a normalized hull functional");
  la.model.add(lil_cmd);
  lil_cmd->add_option("--functional", la.functional, "v1, area, volume, diameter, com-area");
  lil_cmd->add_option("--nmax", la.n_max, "Walk length")->check(CLI::Range(std::size_t{3}, std::size_t{1} << 40));
  lil_cmd->add_option("--replicas", la.replicas, "Independent replicas")->check(CLI::PositiveNumber);
  lil_cmd->add_option("--first-replica", la.first_replica, "Index of the first replica stream");
  lil_cmd->add_option("--checkpoints", la.checkpoint_count, "Number of geometric checkpoints");
  lil_cmd->add_option("--checkpoint-list", la.checkpoint_list, "Explicit checkpoints, comma separated");
  lil_cmd->add_option("--seed", la.seed, "Seed");
  lil_cmd->add_option("--threads", la.threads, "Worker threads (default: HULL_LIL_THREADS or all cores)");
  lil_cmd->add_option("--out-dir", la.out_dir, "Output directory");

  VerifyArgs ver;
  auto* verify_cmd = app.add_subcommand("verify", "Run an invariant suite and print a pass/fail table");
  verify_cmd->add_option("--suite", ver.suite, "steiner, lemmas-s5, scaling, stability")->required();
  verify_cmd->add_option("--functions", ver.options.functions, "Random PL functions");
  verify_cmd->add_option("--grid", ver.options.grid, "Cells of the random PL functions");
  verify_cmd->add_option("--polygons", ver.options.polygons, "Random polygon pairs");
  verify_cmd->add_option("--paths", ver.options.paths, "Simulated paths");
  verify_cmd->add_option("--path-length", ver.options.path_length, "Steps per simulated path");
  verify_cmd->add_option("--k", ver.options.k, "Permuted prefix length");
  verify_cmd->add_option("--nmax", ver.options.n_max, "Largest walk length of the stability probe");
  verify_cmd->add_option("--permutations", ver.options.permutations, "Sampled permutations");
  auto* verify_seed = verify_cmd->add_option("--seed", ver.options.seed, "Seed (a single walk seed for stability)");
  verify_cmd->add_option("--stability-seeds", ver.stability_seeds, "Walk seeds of the stability suite, comma separated");
  verify_cmd->add_option("--out-dir", ver.out_dir, "Output directory");

  try {
    std::vector<std::string> args = expand_config(argc, argv);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(sim);
    if (variational->parsed()) {
      var.grid_given = grid_opt->count() > 0;
      return cmd_variational(var);
    }
    if (lil_cmd->parsed()) return cmd_lil(la);
    if (verify_cmd->parsed()) {
      if (!ver.stability_seeds.empty()) {
        ver.options.stability_seeds.clear();
        for (double v : io::parse_list(ver.stability_seeds)) {
          if (!(v >= 0.0) || v != std::floor(v)) throw Error("seeds must be nonnegative integers");
          ver.options.stability_seeds.push_back(static_cast<std::uint64_t>(v));
        }
      } else if (verify_seed->count() > 0) {
        ver.options.stability_seeds = {ver.options.seed};
      }
      return cmd_verify(ver);
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n" << app.help();
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
