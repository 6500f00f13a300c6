#pragma once

#include <iosfwd>
#include <memory>
#include <string_view>
#include <vector>

#include "dhkrylov/dhdae.hpp"
#include "dhkrylov/hs_core.hpp"
#include "dhkrylov/krylov.hpp"

namespace dhk {

/// One implicit midpoint step as a linear system:
/// A = E + tau/2 (R - J), H = E + tau/2 R, S = -tau/2 J.
struct MidpointSystem {
  HsSplitSystem sys;
  Real tau;
  std::shared_ptr<const DhDaeSystem> source;
};

/// Throws ContractError unless tau > 0.
MidpointSystem midpoint_system(const DhDaeSystem& sys, Real tau);

/// b = (E - tau/2 (R - J)) x_k + tau f(t_k + tau/2)
Vector midpoint_rhs(const MidpointSystem& msys, const Vector& x_k, Real t_k);

/// Ha(x) = x* E x / 2
Real hamiltonian(const DhDaeSystem& sys, const Vector& x);

enum class StepSolver { Direct, Widlund, Rapoport, LGmres, Gmres, Hss };

std::string_view to_string(StepSolver s);
/// "direct" or any name accepted by parse_method.
StepSolver parse_step_solver(std::string_view name);

struct IntegrateOptions {
  Real tol = 1e-12;
  Index maxit = 250;
  Real t0 = 0;
  Real hss_alpha = 1;
  /// Relative tolerance on the algebraic constraints at x0.
  Real consistency_tol = 1e-8;
  bool check_consistency = true;
};

struct Trajectory {
  std::vector<Real> times;
  std::vector<Vector> states;
  std::vector<Real> hamiltonians;
  /// dissipation[k] = tau m* R m for the step ending at times[k],
  /// m the midpoint of the step; dissipation[0] = 0.
  std::vector<Real> dissipation;
  /// Solver iterations per step (0 for the direct solver).
  std::vector<Index> step_iterations;
  Real max_step_relative_residual = 0;
};

/// Integrates from x0 over n_steps uniform steps. Iterative solvers need a
/// positive definite E + tau/2 R (ContractError otherwise, pointing to
/// solve_singular_hermitian_part). A step whose solver misses tol throws
/// ConvergenceError; an initial value violating the algebraic constraints
/// throws ConsistencyError.
Trajectory integrate(const DhDaeSystem& sys, const Vector& x0, Real tau,
                     Index n_steps, StepSolver solver,
                     const IntegrateOptions& opts = {});

/// Columns t, x1..xn, hamiltonian, dissipation (complex builds split each
/// state entry into _re and _im columns).
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);

}  // namespace dhk
