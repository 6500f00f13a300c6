#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dhkrylov/config.hpp"

namespace dhk::bench {

/// Right-hand side of the midpoint systems. FromModel uses tau f(tau/2),
/// the source contribution of a first step started at x = 0.
enum class RhsKind { FromModel, Random, File };

struct RhsSpec {
  RhsKind kind = RhsKind::Random;
  unsigned seed = 1;
  std::string path;
};

struct Scenario {
  nlohmann::json model;
  std::vector<Real> tau_list;
  std::vector<std::string> solvers;
  Real tol = 1e-12;
  Index maxit = 250;
  RhsSpec rhs;
  /// Empty means sqrt(lambda_min(H) lambda_max(H)) per midpoint matrix.
  std::optional<Real> hss_alpha;
  /// Also record ||x - x_k||_H against a direct solve.
  bool track_error = true;
};

/// Entries uniform in [-1, 1] (real and imaginary parts in complex builds)
/// from a mt19937_64 seeded with seed.
Vector random_rhs(Index n, unsigned seed);

/// Parses a scenario object. Throws ContractError (usage error) for an
/// unknown solver, an empty solver list or a nonpositive step size.
Scenario parse_scenario(const nlohmann::json& config);
nlohmann::json to_json(const Scenario& sc);

struct ResultRow {
  std::string model;
  Real tau = 0;
  std::string solver;
  Index iterations = 0;
  Real final_rel_res = 0;
  bool converged = false;
  /// Half-width of spec(H^{-1} S); absent when H is singular.
  std::optional<Real> lambda;
  double wall_time_s = 0;
  /// "direct" for a positive definite Hermitian part, "schur" otherwise.
  std::string path;
  /// Set when the solver rejected the system; the other fields are then
  /// defaults.
  std::optional<std::string> error;
  std::string csv_file;
};

struct ScenarioResult {
  std::vector<ResultRow> rows;
  Index order = 0;
  nlohmann::json manifest;
};

/// Runs every (solver, tau) cell. With out_dir set, writes one residual CSV
/// per cell under out_dir/residuals, table.txt, table.json and
/// manifest.json.
ScenarioResult run_scenario(const Scenario& sc,
                            const std::optional<std::filesystem::path>& out_dir = {});

nlohmann::json table_json(const std::vector<ResultRow>& rows);
std::string table_text(const std::vector<ResultRow>& rows);

/// Staircase audit of A = H + S as a JSON object.
nlohmann::json audit_staircase(const Matrix& a, Real tol = 1e-10);

}  // namespace dhk::bench
