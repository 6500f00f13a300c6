#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dhkrylov/config.hpp"
#include "dhkrylov/hs_core.hpp"

namespace dhk {

using LinearOperator = std::function<Vector(const Vector&)>;

/// Operator view of A = H + S. solve_h may be empty when H is singular.
struct HsOperators {
  Index n = 0;
  LinearOperator apply_a;
  LinearOperator apply_h;
  LinearOperator apply_s;
  LinearOperator solve_h;
};

/// Dense-backed operators; solve_h uses the cached Cholesky factor.
HsOperators make_operators(const HsSplitSystem& sys);

struct SolverOptions {
  /// Stop when ||b - A x_k||_2 <= tol ||b||_2.
  Real tol = 1e-12;
  Index maxit = 250;
  /// Exact solution; when set, error_h_norm is recorded.
  std::optional<Vector> reference;
  /// Record ||b - A x_k||_{H^-1} (costs one extra H-solve per iteration).
  bool track_hinv_norm = true;
  /// Full H-reorthogonalization of the Lanczos basis. Diagnostic only.
  bool reorthogonalize = false;
  /// Keep every iterate x_0, x_1, ... in the report.
  bool keep_iterates = false;
  /// Keep the Krylov basis in the report (Lanczos or Arnoldi vectors).
  bool keep_basis = false;
};

struct SolveReport {
  std::string method;
  Vector solution;
  Index iterations = 0;
  bool converged = false;
  /// Index k holds the value for x_k, starting with x_0 = 0.
  std::vector<Real> residual_2norm;
  std::vector<Real> residual_hinv_norm;
  std::vector<Real> error_h_norm;
  /// L-GMRES only: ||H^{-1}(b - A x_k)||_2.
  std::vector<Real> preconditioned_residual;
  /// Step at which the recurrence terminated on an invariant subspace.
  std::optional<Index> breakdown;
  double wall_time = 0;
  std::vector<Vector> iterates;
  std::vector<Vector> basis;
  Real b_norm = 0;

  Real relative_residual() const;
};

/// Three-term H-Lanczos recurrence for K = H^{-1} S started from
/// bhat = H^{-1} b. After k calls to lanczos_advance: t_diag and t_sub have
/// k entries (t_{j,j} and t_{j+1,j}), v_curr = v_k and v_next = v_{k+1}.
struct LanczosState {
  Vector v_prev, v_curr, v_next;
  Vector hv_prev, hv_curr, hv_next;  // H times the basis vectors
  std::vector<Scalar> t_diag;
  std::vector<Real> t_sub;
  Index k = 0;
  Real bhat_norm = 0;
  bool breakdown = false;
  bool reorthogonalize = false;
  /// Full basis and H * basis, kept only with reorthogonalization.
  std::vector<Vector> basis, h_basis;
};

LanczosState lanczos_start(const HsOperators& ops, const Vector& b,
                           bool reorthogonalize = false);

/// Appends column k+1 of T. Sets breakdown when
/// t_{k+1,k} <= 1e-14 ||K v_k||_H.
void lanczos_advance(LanczosState& st, const HsOperators& ops);

SolveReport solve_widlund(const HsSplitSystem& sys, const Vector& b,
                          const SolverOptions& opts = {});
SolveReport solve_widlund(const HsOperators& ops, const Vector& b,
                          const SolverOptions& opts = {});

SolveReport solve_rapoport(const HsSplitSystem& sys, const Vector& b,
                           const SolverOptions& opts = {});
SolveReport solve_rapoport(const HsOperators& ops, const Vector& b,
                           const SolverOptions& opts = {});

/// GMRES with modified Gram-Schmidt Arnoldi, no restarts. With a
/// preconditioner P it runs on P A x = P b; the stopping test always uses
/// the unpreconditioned residual. hinv_solve, when given, fills
/// residual_hinv_norm.
SolveReport solve_gmres(const LinearOperator& a, const Vector& b,
                        const SolverOptions& opts = {},
                        const LinearOperator& precond = {},
                        const LinearOperator& hinv_solve = {});
SolveReport solve_gmres(const HsSplitSystem& sys, const Vector& b,
                        const SolverOptions& opts = {});
/// GMRES left-preconditioned by the Hermitian part.
SolveReport solve_lgmres(const HsSplitSystem& sys, const Vector& b,
                         const SolverOptions& opts = {});

/// HSS iteration with exact inner solves by alpha I + H and alpha I + S.
SolveReport solve_hss(const HsSplitSystem& sys, const Vector& b, Real alpha,
                      const SolverOptions& opts = {});

enum class Method { Widlund, Rapoport, LGmres, Gmres, Hss };

std::string_view to_string(Method m);
/// Accepts widlund, rapoport, lgmres, gmres, hss. Throws ContractError.
Method parse_method(std::string_view name);
const std::vector<Method>& all_methods();

SolveReport solve(Method m, const HsSplitSystem& sys, const Vector& b,
                  const SolverOptions& opts = {}, Real hss_alpha = 1);

/// Result of solving [[A, B], [-B*, 0]] [v; p] = [f; g] by Schur reduction.
struct SchurSolveReport {
  Vector v;
  Vector p;
  /// The full solution in the caller's coordinates ([v; p] for
  /// solve_via_schur).
  Vector solution;
  /// Solve with the Schur complement B* A^{-1} B.
  SolveReport outer;
  Index inner_solves = 0;
  Index inner_iterations = 0;
  Real max_inner_relative_residual = 0;
  /// ||rhs - K [v; p]||_2 / ||rhs||_2 on the assembled saddle matrix.
  Real full_relative_residual = 0;
  bool converged = false;
};

/// A must have positive definite Hermitian part and B full column rank.
/// All A-solves and the outer Schur complement solve use `method`.
SchurSolveReport solve_via_schur(const Matrix& a, const Matrix& b,
                                 const Vector& f, const Vector& g,
                                 Method method, const SolverOptions& opts = {},
                                 Real hss_alpha = 1);

/// Solves A x = rhs for a system whose Hermitian part is singular but whose
/// skew part decouples nothing: a unitary change of basis that splits off
/// ker H exposes the [[A11, B], [-B*, 0]] structure, which is then handed to
/// solve_via_schur. Throws ContractError when the transformed (2,2) block
/// is not zero.
SchurSolveReport solve_singular_hermitian_part(const HsSplitSystem& sys,
                                               const Vector& rhs, Method method,
                                               const SolverOptions& opts = {},
                                               Real hss_alpha = 1);

}  // namespace dhk
