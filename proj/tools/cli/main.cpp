// dhkrylov: command-line front end for the solvers, the midpoint integrator,
// scenario benchmarks and staircase audits.

#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "dhkrylov/bounds.hpp"
#include "dhkrylov/csv.hpp"
#include "dhkrylov/dhdae.hpp"
#include "dhkrylov/errors.hpp"
#include "dhkrylov/krylov.hpp"
#include "dhkrylov/matrix_market.hpp"
#include "dhkrylov/timestep.hpp"
#include "dhkrylov_bench/models.hpp"
#include "dhkrylov_bench/scenario.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace dhk;

namespace {

/// Model selection shared by several subcommands: either a config file
/// with a "model" object or --model NAME with --param key=value pairs.
struct ModelArgs {
  std::string name;
  std::vector<std::string> params;

  void add_to(CLI::App* app) {
    app->add_option("--model", name, "model name (see `models list`)");
    app->add_option("--param", params, "model parameter key=value (repeatable)");
  }

  // Applies the flags on top of a descriptor taken from a config file.
  json merge(json descriptor) const {
    if (!name.empty()) {
      if (descriptor.is_object() && descriptor.value("name", "") != name) {
        descriptor = json::object();
      }
      descriptor["name"] = name;
    }
    if (!descriptor.is_object() || !descriptor.contains("name")) {
      throw ContractError("no model given (use --model or a config file)");
    }
    for (const auto& kv : params) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) {
        throw ContractError("--param expects key=value, got '" + kv + "'");
      }
      const std::string value = kv.substr(eq + 1);
      // Numbers and booleans go through the JSON parser, anything else
      // stays a string.
      json parsed = json::parse(value, nullptr, false);
      descriptor["params"][kv.substr(0, eq)] = parsed.is_discarded() ? json(value) : parsed;
    }
    return descriptor;
  }
};

json read_config(const std::string& path) {
  return path.empty() ? json::object() : bench::load_json(path);
}

std::string utc_stamp() {
  const std::time_t now = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return buf;
}

void write_text(const fs::path& path, const std::string& body) {
  std::ofstream os(path);
  os << body;
  if (!os) throw IoError("cannot write " + path.string());
}

void write_manifest(const fs::path& dir, const std::string& command, json details) {
  details["tool"] = "dhkrylov " + command;
  details["created_utc"] = utc_stamp();
  details["scalar"] = kComplexScalar ? "complex" : "real";
  write_text(dir / "manifest.json", details.dump(2) + "\n");
}

Vector load_vector(const std::string& path, Index n) {
  const Matrix m = read_matrix_market(fs::path(path));
  if (m.cols() != 1 || m.rows() != n) {
    throw DimensionError(path + " is not an " + std::to_string(n) + " x 1 vector");
  }
  return m.col(0);
}

// ---------------------------------------------------------------- solve

struct SolveArgs {
  std::string config, matrix, rhs_file, out;
  std::optional<std::string> solver;
  ModelArgs model;
  std::optional<Real> tau, tol, hss_alpha;
  std::optional<Index> maxit;
  unsigned seed = 1;
};

int run_solve(const SolveArgs& a) {
  const json cfg = read_config(a.config);
  const std::string solver = a.solver ? *a.solver : cfg.value("solver", "rapoport");
  const Method method = parse_method(solver);

  Matrix matrix;
  std::optional<Real> tau;
  json source;
  const std::string matrix_path = a.matrix.empty() ? cfg.value("matrix", "") : a.matrix;
  if (!matrix_path.empty()) {
    matrix = read_matrix_market(fs::path(matrix_path));
    source = {{"matrix", matrix_path}};
  } else {
    const json descriptor = a.model.merge(cfg.value("model", json()));
    tau = a.tau ? *a.tau : cfg.value("tau", 1e-3);
    const DhDaeSystem sys = bench::build_model(descriptor);
    matrix = midpoint_system(sys, *tau).sys.a();
    source = {{"model", bench::resolve_descriptor(descriptor)}, {"tau", *tau}};
  }
  const HsSplitSystem sys(matrix);
  const Index n = sys.size();

  Vector b;
  const std::string rhs_path = a.rhs_file.empty() ? cfg.value("rhs_file", "") : a.rhs_file;
  if (!rhs_path.empty()) {
    b = load_vector(rhs_path, n);
  } else {
    b = bench::random_rhs(n, cfg.value("seed", a.seed));
  }

  SolverOptions opts;
  opts.tol = a.tol ? *a.tol : cfg.value("tol", opts.tol);
  opts.maxit = a.maxit ? *a.maxit : cfg.value("maxit", opts.maxit);
  const Real alpha = a.hss_alpha ? *a.hss_alpha : cfg.value("hss_alpha", Real(1));

  json summary = {{"solver", solver}, {"n", n}, {"tol", opts.tol}, {"maxit", opts.maxit}};
  summary.update(source);
  SolveReport history;
  Vector x;
  std::optional<Real> lambda;
  if (sys.has_h_factor()) {
    opts.track_hinv_norm = true;
    history = solve(method, sys, b, opts, alpha);
    lambda = spectral_interval(sys, false).lambda;
    x = history.solution;
    summary["path"] = "direct";
    summary["final_rel_res"] = history.relative_residual();
  } else {
    opts.track_hinv_norm = false;
    const auto rep = solve_singular_hermitian_part(sys, b, method, opts, alpha);
    history = rep.outer;
    x = rep.solution;
    summary["path"] = "schur";
    summary["final_rel_res"] = rep.full_relative_residual;
    summary["inner_solves"] = rep.inner_solves;
    summary["inner_iterations"] = rep.inner_iterations;
  }
  summary["iterations"] = history.iterations;
  summary["converged"] = history.converged;
  summary["lambda"] = lambda ? json(*lambda) : json();
  summary["wall_time_s"] = history.wall_time;

  std::cout << summary.dump(2) << "\n";
  const std::string out = a.out.empty() ? cfg.value("out", "") : a.out;
  if (!out.empty()) {
    fs::create_directories(out);
    std::ofstream csv(fs::path(out) / "residuals.csv");
    write_residual_csv(csv, history, lambda);
    write_matrix_market(fs::path(out) / "solution.mtx", Matrix(x));
    write_manifest(out, "solve",
                   {{"summary", summary},
                    {"files", {"residuals.csv", "solution.mtx"}}});
  }
  return history.converged ? 0 : 2;
}

// ------------------------------------------------------------ integrate

struct IntegrateArgs {
  std::string config, x0_file, out;
  std::optional<std::string> solver;
  ModelArgs model;
  std::optional<Real> tau, tol;
  std::optional<Index> steps, maxit;
};

int run_integrate(const IntegrateArgs& a) {
  const json cfg = read_config(a.config);
  const json descriptor = a.model.merge(cfg.value("model", json()));
  const DhDaeSystem sys = bench::build_model(descriptor);
  const Real tau = a.tau ? *a.tau : cfg.value("tau", 1e-2);
  const Index steps = a.steps ? *a.steps : cfg.value("steps", Index(100));
  const std::string solver = a.solver ? *a.solver : cfg.value("solver", "rapoport");
  IntegrateOptions opts;
  opts.tol = a.tol ? *a.tol : cfg.value("tol", opts.tol);
  opts.maxit = a.maxit ? *a.maxit : cfg.value("maxit", opts.maxit);
  opts.hss_alpha = cfg.value("hss_alpha", opts.hss_alpha);

  const std::string x0_path = a.x0_file.empty() ? cfg.value("x0_file", "") : a.x0_file;
  const Vector x0 =
      x0_path.empty() ? Vector::Zero(sys.order()) : load_vector(x0_path, sys.order());
  const Trajectory traj = integrate(sys, x0, tau, steps, parse_step_solver(solver), opts);

  Index total_iterations = 0;
  for (Index it : traj.step_iterations) total_iterations += it;
  const json summary = {{"model", bench::resolve_descriptor(descriptor)},
                        {"tau", tau},
                        {"steps", steps},
                        {"solver", solver},
                        {"total_iterations", total_iterations},
                        {"max_step_relative_residual", traj.max_step_relative_residual},
                        {"hamiltonian_initial", traj.hamiltonians.front()},
                        {"hamiltonian_final", traj.hamiltonians.back()}};
  std::cout << summary.dump(2) << "\n";

  const std::string out = a.out.empty() ? cfg.value("out", "") : a.out;
  if (!out.empty()) {
    fs::create_directories(out);
    std::ofstream csv(fs::path(out) / "trajectory.csv");
    write_trajectory_csv(csv, traj);
    write_manifest(out, "integrate", {{"summary", summary}, {"files", {"trajectory.csv"}}});
  }
  return 0;
}

// ---------------------------------------------------------------- bench

struct BenchArgs {
  std::string config, out;
  ModelArgs model;
  std::vector<Real> taus;
  std::vector<std::string> solvers;
  std::optional<Real> tol;
  std::optional<Index> maxit;
  std::optional<unsigned> seed;
};

int run_bench(const BenchArgs& a) {
  json cfg = read_config(a.config);
  cfg["model"] = a.model.merge(cfg.value("model", json()));
  if (!a.taus.empty()) cfg["tau_list"] = a.taus;
  if (!a.solvers.empty()) cfg["solvers"] = a.solvers;
  if (a.tol) cfg["tol"] = *a.tol;
  if (a.maxit) cfg["maxit"] = *a.maxit;
  if (a.seed) cfg["rhs"] = {{"kind", "random"}, {"seed", *a.seed}};
  const bench::Scenario sc = bench::parse_scenario(cfg);

  const std::string out = a.out.empty() ? cfg.value("out", "") : a.out;
  const auto result =
      bench::run_scenario(sc, out.empty() ? std::nullopt : std::optional<fs::path>(out));
  std::cout << bench::table_text(result.rows);
  if (!out.empty()) std::cout << "wrote " << out << "\n";
  return 0;
}

// ------------------------------------------------------------ staircase

struct StaircaseArgs {
  std::string matrix, out;
  ModelArgs model;
  Real tau = 1e-3;
  Real tol = 1e-10;
};

int run_staircase(const StaircaseArgs& a) {
  Matrix matrix;
  if (!a.matrix.empty()) {
    matrix = read_matrix_market(fs::path(a.matrix));
  } else {
    const DhDaeSystem sys = bench::build_model(a.model.merge(json()));
    matrix = midpoint_system(sys, a.tau).sys.a();
  }
  const json audit = bench::audit_staircase(matrix, a.tol);
  if (a.out.empty()) {
    std::cout << audit.dump(2) << "\n";
  } else {
    write_text(a.out, audit.dump(2) + "\n");
  }
  return 0;
}

// --------------------------------------------------------------- bounds

struct BoundsArgs {
  std::optional<Real> lambda;
  ModelArgs model;
  Real tau = 1e-3;
  Index kmax = 20;
};

int run_bounds(const BoundsArgs& a) {
  Real lambda = 0;
  json info;
  if (a.lambda) {
    lambda = *a.lambda;
  } else {
    const DhDaeSystem sys = bench::build_model(a.model.merge(json()));
    const MidpointSystem ms = midpoint_system(sys, a.tau);
    lambda = spectral_interval(ms.sys, false).lambda;
    info["kappa_y"] = kappa_y_estimate(ms.sys);
    info["tau"] = a.tau;
  }
  info["lambda"] = lambda;
  info["widlund_factor"] = widlund_factor(lambda);
  info["rapoport_factor"] = rapoport_factor(lambda);
  std::cout << info.dump(2) << "\n";
  std::printf("%4s %14s %14s\n", "k", "widlund(2k)", "rapoport(k)");
  for (Index k = 1; k <= a.kmax; ++k) {
    std::printf("%4lld %14.6e %14.6e\n", static_cast<long long>(k),
                widlund_bound(lambda, k), rapoport_bound(lambda, k));
  }
  return 0;
}

// --------------------------------------------------------------- models

int run_models_list() {
  for (const auto& m : bench::model_catalog()) {
    std::cout << m.name << "\n  " << m.description << "\n  defaults: " << m.defaults.dump()
              << "\n";
  }
  return 0;
}

int run_models_export(const ModelArgs& model, const std::string& out) {
  const json descriptor = model.merge(json());
  const DhDaeSystem sys = bench::build_model(descriptor);
  const auto files = bench::export_model(sys, out);
  json names = json::array();
  for (const auto& f : files) names.push_back(f.filename().string());
  write_manifest(out, "models export",
                 {{"model", bench::resolve_descriptor(descriptor)},
                  {"order", sys.order()},
                  {"files", names}});
  for (const auto& f : files) std::cout << f.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dissipative Hamiltonian DAE solvers and benchmarks"};
  app.require_subcommand(1);

  SolveArgs solve_args;
  auto* solve_cmd = app.add_subcommand("solve", "solve one linear system");
  solve_cmd->add_option("--config", solve_args.config, "JSON config file");
  solve_cmd->add_option("--matrix", solve_args.matrix, "system matrix (Matrix Market)");
  solve_args.model.add_to(solve_cmd);
  solve_cmd->add_option("--tau", solve_args.tau, "midpoint step size for --model");
  solve_cmd->add_option("--solver", solve_args.solver,
                        "widlund | rapoport | lgmres | gmres | hss");
  solve_cmd->add_option("--rhs", solve_args.rhs_file, "right-hand side (Matrix Market)");
  solve_cmd->add_option("--seed", solve_args.seed, "seed of the random right-hand side");
  solve_cmd->add_option("--tol", solve_args.tol);
  solve_cmd->add_option("--maxit", solve_args.maxit);
  solve_cmd->add_option("--hss-alpha", solve_args.hss_alpha);
  solve_cmd->add_option("--out", solve_args.out, "run directory");

  IntegrateArgs int_args;
  auto* int_cmd = app.add_subcommand("integrate", "implicit midpoint time stepping");
  int_cmd->add_option("--config", int_args.config, "JSON config file");
  int_args.model.add_to(int_cmd);
  int_cmd->add_option("--tau", int_args.tau);
  int_cmd->add_option("--steps", int_args.steps);
  int_cmd->add_option("--solver", int_args.solver,
                      "direct | widlund | rapoport | lgmres | gmres | hss");
  int_cmd->add_option("--x0", int_args.x0_file, "initial state (Matrix Market)");
  int_cmd->add_option("--tol", int_args.tol);
  int_cmd->add_option("--maxit", int_args.maxit);
  int_cmd->add_option("--out", int_args.out, "run directory");

  BenchArgs bench_args;
  auto* bench_cmd = app.add_subcommand("bench", "run a solver comparison scenario");
  bench_cmd->add_option("--config", bench_args.config, "scenario JSON file");
  bench_args.model.add_to(bench_cmd);
  bench_cmd->add_option("--tau", bench_args.taus, "step size (repeatable)");
  bench_cmd->add_option("--solver", bench_args.solvers, "solver (repeatable)");
  bench_cmd->add_option("--tol", bench_args.tol);
  bench_cmd->add_option("--maxit", bench_args.maxit);
  bench_cmd->add_option("--seed", bench_args.seed, "random right-hand side seed");
  bench_cmd->add_option("--out", bench_args.out, "run directory");

  StaircaseArgs st_args;
  auto* st_cmd = app.add_subcommand("staircase", "staircase audit of a matrix");
  st_cmd->add_option("--matrix", st_args.matrix, "matrix (Matrix Market)");
  st_args.model.add_to(st_cmd);
  st_cmd->add_option("--tau", st_args.tau, "midpoint step size for --model");
  st_cmd->add_option("--tol", st_args.tol, "relative rank tolerance");
  st_cmd->add_option("--out", st_args.out, "output JSON file (default stdout)");

  BoundsArgs bounds_args;
  auto* bounds_cmd = app.add_subcommand("bounds", "convergence factors and bounds");
  bounds_cmd->add_option("--lambda", bounds_args.lambda, "spectral half-width");
  bounds_args.model.add_to(bounds_cmd);
  bounds_cmd->add_option("--tau", bounds_args.tau, "midpoint step size for --model");
  bounds_cmd->add_option("--kmax", bounds_args.kmax, "largest k to tabulate");

  auto* models_cmd = app.add_subcommand("models", "model generators");
  models_cmd->require_subcommand(1);
  auto* list_cmd = models_cmd->add_subcommand("list", "list models and defaults");
  ModelArgs export_model;
  std::string export_out;
  auto* export_cmd =
      models_cmd->add_subcommand("export", "write E, J, R as Matrix Market files");
  export_model.add_to(export_cmd);
  export_cmd->add_option("--out", export_out, "output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve_cmd->parsed()) return run_solve(solve_args);
    if (int_cmd->parsed()) return run_integrate(int_args);
    if (bench_cmd->parsed()) return run_bench(bench_args);
    if (st_cmd->parsed()) return run_staircase(st_args);
    if (bounds_cmd->parsed()) return run_bounds(bounds_args);
    if (list_cmd->parsed()) return run_models_list();
    if (export_cmd->parsed()) return run_models_export(export_model, export_out);
  } catch (const ContractError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 64;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
