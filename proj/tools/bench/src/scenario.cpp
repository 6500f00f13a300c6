#include "dhkrylov_bench/scenario.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "dhkrylov/bounds.hpp"
#include "dhkrylov/csv.hpp"
#include "dhkrylov/errors.hpp"
#include "dhkrylov/krylov.hpp"
#include "dhkrylov/matrix_market.hpp"
#include "dhkrylov/staircase.hpp"
#include "dhkrylov/timestep.hpp"
#include "dhkrylov_bench/models.hpp"

namespace dhk::bench {

using nlohmann::json;

namespace {

template <typename S>
S make_scalar(Real re, Real im) {
  if constexpr (std::is_same_v<S, Real>) {
    (void)im;
    return re;
  } else {
    return S(re, im);
  }
}

std::string_view to_string(RhsKind k) {
  switch (k) {
    case RhsKind::FromModel: return "from-model";
    case RhsKind::Random: return "random";
    case RhsKind::File: return "file";
  }
  return "?";
}

RhsSpec parse_rhs(const json& j) {
  RhsSpec spec;
  if (j.is_string()) {
    const auto kind = j.get<std::string>();
    if (kind == "from-model") {
      spec.kind = RhsKind::FromModel;
    } else if (kind == "random") {
      spec.kind = RhsKind::Random;
    } else {
      throw ContractError("rhs must be \"from-model\", \"random\" or an object");
    }
    return spec;
  }
  const auto kind = j.value("kind", std::string("random"));
  if (kind == "from-model") {
    spec.kind = RhsKind::FromModel;
  } else if (kind == "random") {
    spec.kind = RhsKind::Random;
    spec.seed = j.value("seed", 1u);
  } else if (kind == "file") {
    spec.kind = RhsKind::File;
    spec.path = j.at("path").get<std::string>();
  } else {
    throw ContractError("unknown rhs kind '" + kind + "'");
  }
  return spec;
}

Vector make_rhs(const RhsSpec& spec, const DhDaeSystem& sys, Real tau) {
  const Index n = sys.order();
  switch (spec.kind) {
    case RhsKind::FromModel: {
      Vector b = tau * sys.source(tau / 2);
      if (b.norm() == 0) {
        throw ContractError("rhs from-model: the model has no source term");
      }
      return b;
    }
    case RhsKind::Random:
      return random_rhs(n, spec.seed);
    case RhsKind::File: {
      const Matrix m = read_matrix_market(std::filesystem::path(spec.path));
      if (m.cols() != 1 || m.rows() != n) {
        throw DimensionError("rhs file " + spec.path + " is not an " +
                             std::to_string(n) + " x 1 vector");
      }
      return m.col(0);
    }
  }
  return Vector::Zero(n);
}

Real auto_hss_alpha(const HsSplitSystem& sys) {
  const auto& info = sys.definiteness_info();
  return std::sqrt(std::max(info.min_eigenvalue, Real(0)) * info.max_eigenvalue);
}

std::string cell_file_name(const std::string& solver, std::size_t tau_index) {
  return solver + "_tau" + std::to_string(tau_index) + ".csv";
}

}  // namespace

Vector random_rhs(Index n, unsigned seed) {
  // A fresh stream per call, so every (solver, tau) cell sees the same b.
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<Real> u(-1, 1);
  Vector b(n);
  for (Index i = 0; i < n; ++i) {
    const Real re = u(gen);
    b(i) = make_scalar<Scalar>(re, kComplexScalar ? u(gen) : Real(0));
  }
  return b;
}

Scenario parse_scenario(const json& config) {
  Scenario sc;
  try {
    sc.model = config.at("model");
    sc.tau_list = config.at("tau_list").get<std::vector<Real>>();
    sc.solvers = config.value("solvers", std::vector<std::string>{"widlund", "rapoport",
                                                                  "lgmres", "gmres"});
    sc.tol = config.value("tol", sc.tol);
    sc.maxit = config.value("maxit", sc.maxit);
    if (config.contains("rhs")) sc.rhs = parse_rhs(config.at("rhs"));
    if (config.contains("hss_alpha") && !config.at("hss_alpha").is_null()) {
      const auto& a = config.at("hss_alpha");
      if (!(a.is_string() && a.get<std::string>() == "auto")) sc.hss_alpha = a.get<Real>();
    }
    sc.track_error = config.value("track_error", sc.track_error);
  } catch (const json::exception& e) {
    throw ContractError(std::string("scenario: ") + e.what());
  }
  if (sc.solvers.empty()) throw ContractError("scenario: no solvers selected");
  for (const auto& s : sc.solvers) parse_method(s);
  if (sc.tau_list.empty()) throw ContractError("scenario: tau_list is empty");
  for (Real tau : sc.tau_list) {
    if (!(tau > 0)) throw ContractError("scenario: step sizes must be positive");
  }
  if (!(sc.tol > 0) || sc.maxit < 1) {
    throw ContractError("scenario: tol must be positive and maxit at least 1");
  }
  resolve_descriptor(sc.model);
  return sc;
}

json to_json(const Scenario& sc) {
  json rhs = {{"kind", to_string(sc.rhs.kind)}};
  if (sc.rhs.kind == RhsKind::Random) rhs["seed"] = sc.rhs.seed;
  if (sc.rhs.kind == RhsKind::File) rhs["path"] = sc.rhs.path;
  json out = {{"model", resolve_descriptor(sc.model)},
              {"tau_list", sc.tau_list},
              {"solvers", sc.solvers},
              {"tol", sc.tol},
              {"maxit", sc.maxit},
              {"rhs", rhs},
              {"track_error", sc.track_error}};
  out["hss_alpha"] = sc.hss_alpha ? json(*sc.hss_alpha) : json("auto");
  return out;
}

ScenarioResult run_scenario(const Scenario& sc,
                            const std::optional<std::filesystem::path>& out_dir) {
  const DhDaeSystem sys = build_model(sc.model);
  const std::string model_name = sc.model.at("name").get<std::string>();
  ScenarioResult result;
  result.order = sys.order();

  if (out_dir) std::filesystem::create_directories(*out_dir / "residuals");

  json lambdas = json::array();
  for (std::size_t ti = 0; ti < sc.tau_list.size(); ++ti) {
    const Real tau = sc.tau_list[ti];
    const MidpointSystem ms = midpoint_system(sys, tau);
    const Vector b = make_rhs(sc.rhs, sys, tau);
    const bool pd = ms.sys.has_h_factor();

    std::optional<Real> lambda;
    if (pd) lambda = spectral_interval(ms.sys, false).lambda;
    lambdas.push_back({{"tau", tau}, {"lambda", lambda ? json(*lambda) : json()}});

    SolverOptions opts;
    opts.tol = sc.tol;
    opts.maxit = sc.maxit;
    opts.track_hinv_norm = pd;
    if (pd && sc.track_error) opts.reference = refined_solve(ms.sys.a(), b);

    for (const auto& solver : sc.solvers) {
      const Method m = parse_method(solver);
      ResultRow row;
      row.model = model_name;
      row.tau = tau;
      row.solver = solver;
      row.lambda = lambda;
      row.path = pd ? "direct" : "schur";
      const Real alpha = sc.hss_alpha ? *sc.hss_alpha
                         : pd         ? auto_hss_alpha(ms.sys)
                                      : Real(1);
      SolveReport history;
      try {
        const auto t0 = std::chrono::steady_clock::now();
        if (pd) {
          history = solve(m, ms.sys, b, opts, alpha);
          row.iterations = history.iterations;
          row.final_rel_res = history.relative_residual();
          row.converged = history.converged;
        } else {
          SolverOptions inner = opts;
          inner.reference.reset();
          const auto rep = solve_singular_hermitian_part(ms.sys, b, m, inner, alpha);
          history = rep.outer;
          row.iterations = rep.outer.iterations;
          row.final_rel_res = rep.full_relative_residual;
          row.converged = rep.converged;
        }
        row.wall_time_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      } catch (const Error& e) {
        row.error = e.what();
      }
      if (out_dir && !row.error) {
        row.csv_file = "residuals/" + cell_file_name(solver, ti);
        std::ofstream os(*out_dir / row.csv_file);
        // Bound columns only make sense for the full system.
        write_residual_csv(os, history, pd ? lambda : std::nullopt);
        if (!os) throw IoError("cannot write " + (*out_dir / row.csv_file).string());
      }
      result.rows.push_back(std::move(row));
    }
  }

  json files = json::array();
  for (const auto& r : result.rows) {
    if (!r.csv_file.empty()) files.push_back(r.csv_file);
  }
  const std::time_t now = std::time(nullptr);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  result.manifest = {{"tool", "dhkrylov bench"},
                     {"created_utc", stamp},
                     {"scalar", kComplexScalar ? "complex" : "real"},
                     {"scenario", to_json(sc)},
                     {"order", result.order},
                     {"lambda", lambdas},
                     {"residual_csv", files},
                     {"tables", {"table.txt", "table.json"}}};

  if (out_dir) {
    auto write = [&](const char* name, const std::string& body) {
      std::ofstream os(*out_dir / name);
      os << body;
      if (!os) throw IoError("cannot write " + (*out_dir / name).string());
    };
    write("table.json", table_json(result.rows).dump(2) + "\n");
    write("table.txt", table_text(result.rows));
    write("manifest.json", result.manifest.dump(2) + "\n");
  }
  return result;
}

json table_json(const std::vector<ResultRow>& rows) {
  json out = json::array();
  for (const auto& r : rows) {
    json j = {{"model", r.model},
              {"tau", r.tau},
              {"solver", r.solver},
              {"iterations", r.iterations},
              {"final_rel_res", r.final_rel_res},
              {"converged", r.converged},
              {"lambda", r.lambda ? json(*r.lambda) : json()},
              {"wall_time_s", r.wall_time_s},
              {"path", r.path}};
    if (r.error) j["error"] = *r.error;
    out.push_back(std::move(j));
  }
  return out;
}

std::string table_text(const std::vector<ResultRow>& rows) {
  std::ostringstream os;
  char line[256];
  std::snprintf(line, sizeof line, "%-12s %-10s %-9s %6s %13s %5s %11s %10s\n",
                "model", "tau", "solver", "iter", "final_rel_res", "conv", "lambda",
                "time[s]");
  os << line;
  for (const auto& r : rows) {
    if (r.error) {
      std::snprintf(line, sizeof line, "%-12s %-10.3g %-9s  error: ", r.model.c_str(),
                    r.tau, r.solver.c_str());
      os << line << *r.error << "\n";
      continue;
    }
    const std::string lam =
        r.lambda ? format_real(*r.lambda).substr(0, 11) : std::string("-");
    std::snprintf(line, sizeof line, "%-12s %-10.3g %-9s %6lld %13.3e %5s %11s %10.4f\n",
                  r.model.c_str(), r.tau, r.solver.c_str(),
                  static_cast<long long>(r.iterations), r.final_rel_res,
                  r.converged ? "yes" : "no", lam.c_str(), r.wall_time_s);
    os << line;
  }
  return os.str();
}

json audit_staircase(const Matrix& a, Real tol) {
  const HsParts parts = split_hs(a);
  const StaircaseForm sf = hs_staircase(parts.h, parts.s, tol);
  return json::parse(staircase_report_json(sf, parts.h, parts.s));
}

}  // namespace dhk::bench
