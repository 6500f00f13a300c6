#include "dhkrylov/timestep.hpp"

#include <ostream>
#include <sstream>

#include <Eigen/LU>

#include "dhkrylov/csv.hpp"

namespace dhk {

MidpointSystem midpoint_system(const DhDaeSystem& sys, Real tau) {
  if (!(tau > 0)) throw ContractError("midpoint_system: tau must be positive");
  auto src = std::make_shared<const DhDaeSystem>(sys);
  Matrix h = sys.e + (tau / 2) * sys.r;
  Matrix s = (-tau / 2) * sys.j;
  return MidpointSystem{HsSplitSystem::from_parts(std::move(h), std::move(s)),
                        tau, std::move(src)};
}

Vector midpoint_rhs(const MidpointSystem& msys, const Vector& x_k, Real t_k) {
  const DhDaeSystem& sys = *msys.source;
  if (x_k.size() != sys.order()) {
    throw DimensionError("midpoint_rhs: state has wrong length");
  }
  const Real half = msys.tau / 2;
  Vector b = sys.e * x_k - half * (sys.r * x_k - sys.j * x_k);
  if (sys.f) b += msys.tau * sys.source(t_k + half);
  return b;
}

Real hamiltonian(const DhDaeSystem& sys, const Vector& x) {
  return Real(0.5) * std::real(x.dot(sys.e * x));
}

std::string_view to_string(StepSolver s) {
  switch (s) {
    case StepSolver::Direct:
      return "direct";
    case StepSolver::Widlund:
      return to_string(Method::Widlund);
    case StepSolver::Rapoport:
      return to_string(Method::Rapoport);
    case StepSolver::LGmres:
      return to_string(Method::LGmres);
    case StepSolver::Gmres:
      return to_string(Method::Gmres);
    case StepSolver::Hss:
      return to_string(Method::Hss);
  }
  return "?";
}

StepSolver parse_step_solver(std::string_view name) {
  if (name == "direct") return StepSolver::Direct;
  switch (parse_method(name)) {
    case Method::Widlund:
      return StepSolver::Widlund;
    case Method::Rapoport:
      return StepSolver::Rapoport;
    case Method::LGmres:
      return StepSolver::LGmres;
    case Method::Gmres:
      return StepSolver::Gmres;
    case Method::Hss:
      return StepSolver::Hss;
  }
  return StepSolver::Direct;
}

namespace {

Method as_method(StepSolver s) {
  switch (s) {
    case StepSolver::Widlund:
      return Method::Widlund;
    case StepSolver::Rapoport:
      return Method::Rapoport;
    case StepSolver::LGmres:
      return Method::LGmres;
    case StepSolver::Gmres:
      return Method::Gmres;
    case StepSolver::Hss:
      return Method::Hss;
    case StepSolver::Direct:
      break;
  }
  throw ContractError("as_method: direct solver has no Krylov method");
}

// The algebraic equations are the rows of E x' = (J - R) x + f projected
// onto ker E; they must hold at the initial time.
void check_consistency(const DhDaeSystem& sys, const Vector& x0, Real t0,
                       Real tol) {
  const IndexReport rep = index_classify(sys);
  const Matrix& z = rep.nullspace_basis_of_e;
  if (z.cols() == 0) return;
  const Matrix a = sys.j - sys.r;
  const Vector f = sys.source(t0);
  const Vector c = z.adjoint() * (a * x0 + f);
  const Real scale = norm2(a) * x0.norm() + f.norm();
  if (c.norm() > tol * scale || (scale == 0 && c.norm() > 0)) {
    std::ostringstream os;
    os << "integrate: initial value violates the algebraic constraints "
          "(residual "
       << c.norm() << ", scale " << scale << ")";
    throw ConsistencyError(os.str());
  }
}

}  // namespace

Trajectory integrate(const DhDaeSystem& sys, const Vector& x0, Real tau,
                     Index n_steps, StepSolver solver,
                     const IntegrateOptions& opts) {
  sys.validate();
  if (x0.size() != sys.order()) {
    throw DimensionError("integrate: x0 has wrong length");
  }
  if (n_steps < 0) throw ContractError("integrate: n_steps must be >= 0");
  const MidpointSystem msys = midpoint_system(sys, tau);
  if (solver != StepSolver::Direct && !msys.sys.has_h_factor()) {
    throw ContractError(
        "integrate: E + tau/2 R is singular, so the Krylov solvers do not "
        "apply; solve the steps with solve_singular_hermitian_part (Schur "
        "path) or the direct solver");
  }
  if (opts.check_consistency) {
    check_consistency(sys, x0, opts.t0, opts.consistency_tol);
  }

  std::optional<Eigen::PartialPivLU<Matrix>> lu;
  if (solver == StepSolver::Direct) lu.emplace(msys.sys.a());
  SolverOptions sopts;
  sopts.tol = opts.tol;
  sopts.maxit = opts.maxit;
  sopts.track_hinv_norm = false;

  Trajectory traj;
  Vector x = x0;
  Real t = opts.t0;
  traj.times.push_back(t);
  traj.states.push_back(x);
  traj.hamiltonians.push_back(hamiltonian(sys, x));
  traj.dissipation.push_back(0);
  traj.step_iterations.push_back(0);

  for (Index step = 0; step < n_steps; ++step) {
    const Vector b = midpoint_rhs(msys, x, t);
    Vector next;
    Index iters = 0;
    if (lu) {
      next = lu->solve(b);
      next += lu->solve(Vector(b - msys.sys.a() * next));
    } else {
      const SolveReport rep =
          solve(as_method(solver), msys.sys, b, sopts, opts.hss_alpha);
      if (!rep.converged) {
        std::ostringstream os;
        os << "integrate: " << rep.method << " missed tol at step " << step + 1
           << " (relative residual " << rep.relative_residual() << ")";
        throw ConvergenceError(os.str());
      }
      next = rep.solution;
      iters = rep.iterations;
    }
    const Real bn = b.norm();
    const Real res = (b - msys.sys.a() * next).norm();
    traj.max_step_relative_residual =
        std::max(traj.max_step_relative_residual, bn > 0 ? res / bn : res);

    const Vector m = Real(0.5) * (x + next);
    t = opts.t0 + Real(step + 1) * tau;
    x = std::move(next);
    traj.times.push_back(t);
    traj.states.push_back(x);
    traj.hamiltonians.push_back(hamiltonian(sys, x));
    traj.dissipation.push_back(tau * std::real(m.dot(sys.r * m)));
    traj.step_iterations.push_back(iters);
  }
  return traj;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  const Index n = traj.states.empty() ? 0 : traj.states.front().size();
  os << 't';
  for (Index i = 1; i <= n; ++i) {
    if constexpr (kComplexScalar) {
      os << ",x" << i << "_re,x" << i << "_im";
    } else {
      os << ",x" << i;
    }
  }
  os << ",hamiltonian,dissipation\n";
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    os << format_real(traj.times[k]);
    for (Index i = 0; i < n; ++i) {
      const Scalar v = traj.states[k](i);
      os << ',' << format_real(std::real(v));
      if constexpr (kComplexScalar) os << ',' << format_real(std::imag(v));
    }
    os << ',' << format_real(traj.hamiltonians[k]) << ','
       << format_real(traj.dissipation[k]) << '\n';
  }
}

}  // namespace dhk
