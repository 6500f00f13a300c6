#include <gtest/gtest.h>

#include <cmath>
#include <sstream>
#include <string>

#include "dhkrylov/timestep.hpp"
#include "oracles.hpp"

namespace dhk {
namespace {

using testing::Rng;

Matrix scalar(Real v) {
  Matrix m(1, 1);
  m << v;
  return m;
}

DhDaeSystem random_mechanical(Index n, bool damped, Rng& rng) {
  return assemble_mechanical(
      testing::random_hpd(n, 10, rng),
      damped ? testing::random_psd(n, n / 2, rng) : Matrix(Matrix::Zero(n, n)),
      testing::random_hpd(n, 10, rng));
}

TEST(MidpointSystem, NoDynamicsGivesE) {
  const auto sys = make_dhdae(Matrix::Identity(3, 3) * 2, Matrix::Zero(3, 3),
                              Matrix::Zero(3, 3));
  const auto ms = midpoint_system(sys, 0.3);
  EXPECT_EQ(max_abs(Matrix(ms.sys.a() - sys.e)), 0.0);
  EXPECT_EQ(max_abs(ms.sys.s()), 0.0);
}

TEST(MidpointSystem, RlcHermitianPart) {
  RlcParameters p{2, 3, 4, 5, 6, 7};
  const auto ms = midpoint_system(assemble_rlc(p), 0.1);
  Vector d(5);
  d << 2 + 0.05 * 6, 3, 4, 0.05 * 5, 0.05 * 7;
  EXPECT_LT(max_abs(Matrix(ms.sys.h() - Matrix(d.asDiagonal()))), 1e-15);
  EXPECT_TRUE(ms.sys.has_h_factor());
}

TEST(MidpointSystem, SplitApproachesEAtLinearRate) {
  Rng rng(3);
  const auto sys = random_mechanical(6, true, rng);
  std::vector<Real> dh, ds;
  for (Real tau : {1e-1, 1e-2, 1e-3}) {
    const auto ms = midpoint_system(sys, tau);
    dh.push_back(norm2(ms.sys.h() - sys.e));
    ds.push_back(norm2(ms.sys.s()));
  }
  for (std::size_t i = 1; i < dh.size(); ++i) {
    EXPECT_NEAR(dh[i - 1] / dh[i], 10.0, 1e-8);
    EXPECT_NEAR(ds[i - 1] / ds[i], 10.0, 1e-8);
  }
}

TEST(MidpointSystem, RejectsNonpositiveStep) {
  const auto sys = assemble_rlc({});
  EXPECT_THROW(midpoint_system(sys, 0.0), ContractError);
  EXPECT_THROW(midpoint_system(sys, -1e-3), ContractError);
}

TEST(MidpointRhs, ZeroSourceZeroState) {
  const auto ms = midpoint_system(assemble_rlc({}), 0.1);
  EXPECT_EQ(midpoint_rhs(ms, Vector::Zero(5), 0).norm(), 0.0);
}

TEST(MidpointRhs, ScalarHandEvaluation) {
  const auto sys = make_dhdae(scalar(1), scalar(0), scalar(0),
                              [](Real) { return Vector(Vector::Ones(1)); });
  const auto ms = midpoint_system(sys, 0.1);
  Vector x(1);
  x << 2;
  EXPECT_NEAR(std::real(midpoint_rhs(ms, x, 0)(0)), 2.1, 1e-15);
}

TEST(Integrate, SecondOrderConvergence) {
  // x' = -x + (1 + t), x(0) = 1, exact solution x(t) = t + exp(-t).
  const auto sys = make_dhdae(scalar(1), scalar(0), scalar(1), [](Real t) {
    Vector f(1);
    f << 1 + t;
    return f;
  });
  Vector x0(1);
  x0 << 1;
  std::vector<Real> err;
  for (Index steps : {10, 20, 40, 80}) {
    const auto traj = integrate(sys, x0, 1.0 / steps, steps, StepSolver::Direct);
    err.push_back(std::abs(std::real(traj.states.back()(0)) - (1 + std::exp(-1.0))));
  }
  for (std::size_t i = 1; i < err.size(); ++i) {
    const Real ratio = err[i - 1] / err[i];
    EXPECT_GE(ratio, 3.5);
    EXPECT_LE(ratio, 4.5);
  }
}

TEST(Integrate, SecondOrderAgainstFineReference) {
  Rng rng(9);
  auto sys = random_mechanical(4, true, rng);
  sys.f = [](Real t) {
    Vector f = Vector::Zero(8);
    f(0) = std::sin(3 * t);
    f(1) = std::cos(t);
    return f;
  };
  const Vector x0 = testing::random_vector(8, rng);
  const Real horizon = 1;
  const Index base = 20;
  const auto ref = integrate(sys, x0, horizon / (16 * 8 * base), 16 * 8 * base,
                             StepSolver::Direct);
  std::vector<Real> err;
  for (Index m : {1, 2, 4, 8}) {
    const auto traj = integrate(sys, x0, horizon / (m * base), m * base,
                                StepSolver::Direct);
    err.push_back((traj.states.back() - ref.states.back()).norm());
  }
  for (std::size_t i = 1; i < err.size(); ++i) {
    const Real ratio = err[i - 1] / err[i];
    EXPECT_GE(ratio, 3.5) << "halving " << i;
    EXPECT_LE(ratio, 4.5) << "halving " << i;
  }
}

TEST(Integrate, DissipationIdentityPerStep) {
  Rng rng(4);
  const auto sys = random_mechanical(10, true, rng);
  const Vector x0 = testing::random_vector(20, rng);
  for (StepSolver solver : {StepSolver::Direct, StepSolver::Widlund,
                            StepSolver::Rapoport, StepSolver::LGmres}) {
    const auto traj = integrate(sys, x0, 0.05, 100, solver);
    ASSERT_EQ(traj.states.size(), 101u);
    for (std::size_t k = 1; k < traj.states.size(); ++k) {
      const Real dha = traj.hamiltonians[k] - traj.hamiltonians[k - 1];
      EXPECT_NEAR(dha, -traj.dissipation[k], 1e-10 * traj.hamiltonians[k - 1])
          << to_string(solver) << " step " << k;
      EXPECT_LE(traj.hamiltonians[k], traj.hamiltonians[k - 1]);
    }
    EXPECT_LT(traj.hamiltonians.back(), traj.hamiltonians.front());
  }
}

TEST(Integrate, UndampedConservesHamiltonian) {
  Rng rng(5);
  const auto sys = random_mechanical(8, false, rng);
  const Vector x0 = testing::random_vector(16, rng);
  const auto traj = integrate(sys, x0, 0.1, 100, StepSolver::Widlund);
  for (Real ha : traj.hamiltonians) {
    EXPECT_NEAR(ha, traj.hamiltonians[0], 1e-10 * traj.hamiltonians[0]);
  }
}

TEST(Integrate, RlcApproachesDcOperatingPoint) {
  RlcParameters p{1.0, 0.5, 2.0, 3.0, 0.7, 1.3};
  const auto sys = assemble_rlc(p, [](Real) { return 1.0; });
  const Vector dc = direct_solve(sys.j - sys.r, Vector(-sys.source(0)));
  Vector x0 = Vector::Zero(5);
  x0(3) = 1.0 / p.resistance_g;  // consistent: 0 = V1 - R_G I_G + E_G
  const auto traj = integrate(sys, x0, 0.1, 1500, StepSolver::Rapoport);
  EXPECT_LT((traj.states.back() - dc).norm(), 1e-9 * dc.norm());
  EXPECT_LT((traj.states[100] - dc).norm(), (traj.states[10] - dc).norm());
}

TEST(Integrate, InconsistentInitialValueThrows) {
  const auto sys = assemble_rlc({}, [](Real) { return 1.0; });
  EXPECT_THROW(integrate(sys, Vector::Zero(5), 0.1, 3, StepSolver::Direct),
               ConsistencyError);
}

TEST(Integrate, SingularHermitianPartNeedsSchurPath) {
  StokesLikeParameters p;
  p.grid_n = 3;
  const auto sys = assemble_stokes_like(p);
  const Vector x0 = Vector::Zero(sys.order());
  EXPECT_THROW(integrate(sys, x0, 0.01, 2, StepSolver::Widlund), ContractError);
  EXPECT_NO_THROW(integrate(sys, x0, 0.01, 2, StepSolver::Direct));
}

TEST(Integrate, EveryStepMeetsTolerance) {
  StokesLikeParameters p;
  p.grid_n = 4;
  p.stabilization = 1;
  p.convection = 2;
  const auto sys = assemble_stokes_like(p);
  Rng rng(2);
  Vector x0 = Vector::Zero(sys.order());
  const auto blk = stokes_like_blocks(p);
  // Consistent start: pick v, then p from the algebraic rows -B* v + C p = 0.
  const Vector v = testing::random_vector(blk.n_velocity, rng);
  x0.head(blk.n_velocity) = v;
  x0.tail(blk.n_pressure) = direct_solve(blk.c, Vector(blk.b.adjoint() * v));
  for (StepSolver s : {StepSolver::Widlund, StepSolver::Rapoport,
                       StepSolver::LGmres, StepSolver::Gmres}) {
    const auto traj = integrate(sys, x0, 1e-3, 5, s);
    EXPECT_LE(traj.max_step_relative_residual, 1e-12 * (1 + 1e-12))
        << to_string(s);
    for (std::size_t k = 1; k < traj.step_iterations.size(); ++k) {
      EXPECT_GT(traj.step_iterations[k], 0);
    }
  }
}

TEST(StepSolverNames, ParseAndPrint) {
  for (StepSolver s : {StepSolver::Direct, StepSolver::Widlund,
                       StepSolver::Rapoport, StepSolver::LGmres,
                       StepSolver::Gmres, StepSolver::Hss}) {
    EXPECT_EQ(parse_step_solver(to_string(s)), s);
  }
  EXPECT_THROW(parse_step_solver("cg"), ContractError);
}

TEST(TrajectoryCsv, HeaderAndRowCount) {
  const auto sys = assemble_mechanical(scalar(1), scalar(0.1), scalar(1));
  Vector x0(2);
  x0 << 1, 0;
  const auto traj = integrate(sys, x0, 0.1, 4, StepSolver::Direct);
  std::ostringstream os;
  write_trajectory_csv(os, traj);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line.rfind("t,", 0), 0u);
  EXPECT_NE(line.find("hamiltonian,dissipation"), std::string::npos);
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 5);
}

}  // namespace
}  // namespace dhk
