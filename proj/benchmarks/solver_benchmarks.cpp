#include <benchmark/benchmark.h>

#include <random>

#include "dhkrylov/krylov.hpp"
#include "dhkrylov/staircase.hpp"
#include "dhkrylov/timestep.hpp"

namespace {

using namespace dhk;

// Fixed-end spring chain with Rayleigh damping, n masses (order 2n).
DhDaeSystem spring_chain(Index n) {
  Matrix k = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    k(i, i) = 2e4;
    if (i + 1 < n) k(i, i + 1) = k(i + 1, i) = -1e4;
  }
  const Matrix m = Matrix::Identity(n, n);
  return assemble_mechanical(m, 0.1 * m + 1e-3 * k, k);
}

Vector random_vector(Index n, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<Real> u(-1, 1);
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = u(gen);
  return v;
}

void BM_Solve(benchmark::State& state, Method method) {
  const auto ms = midpoint_system(spring_chain(state.range(0)), 1e-3);
  const Vector b = random_vector(ms.sys.size(), 1);
  SolverOptions opts;
  opts.track_hinv_norm = false;
  const Real alpha = std::sqrt(ms.sys.definiteness_info().min_eigenvalue *
                               ms.sys.definiteness_info().max_eigenvalue);
  Index iterations = 0;
  for (auto _ : state) {
    auto rep = solve(method, ms.sys, b, opts, alpha);
    iterations = rep.iterations;
    benchmark::DoNotOptimize(rep.solution.data());
  }
  state.counters["iterations"] = static_cast<double>(iterations);
}

BENCHMARK_CAPTURE(BM_Solve, widlund, Method::Widlund)->Arg(50)->Arg(200)->Arg(400);
BENCHMARK_CAPTURE(BM_Solve, rapoport, Method::Rapoport)->Arg(50)->Arg(200)->Arg(400);
BENCHMARK_CAPTURE(BM_Solve, lgmres, Method::LGmres)->Arg(50)->Arg(200)->Arg(400);
BENCHMARK_CAPTURE(BM_Solve, gmres, Method::Gmres)->Arg(50)->Arg(200)->Arg(400);
BENCHMARK_CAPTURE(BM_Solve, hss, Method::Hss)->Arg(50)->Arg(200);

void BM_Direct(benchmark::State& state) {
  const auto ms = midpoint_system(spring_chain(state.range(0)), 1e-3);
  const Vector b = random_vector(ms.sys.size(), 1);
  for (auto _ : state) {
    Vector x = direct_solve(ms.sys.a(), b);
    benchmark::DoNotOptimize(x.data());
  }
}
BENCHMARK(BM_Direct)->Arg(50)->Arg(200)->Arg(400);

void BM_LanczosStep(benchmark::State& state) {
  const auto ms = midpoint_system(spring_chain(state.range(0)), 1e-3);
  const auto ops = make_operators(ms.sys);
  const Vector b = random_vector(ms.sys.size(), 2);
  auto st = lanczos_start(ops, b);
  for (auto _ : state) {
    if (st.breakdown || st.k > 40) {
      state.PauseTiming();
      st = lanczos_start(ops, b);
      state.ResumeTiming();
    }
    lanczos_advance(st, ops);
  }
}
BENCHMARK(BM_LanczosStep)->Arg(50)->Arg(200)->Arg(400);

void BM_StokesStaircase(benchmark::State& state) {
  StokesLikeParameters p;
  p.grid_n = state.range(0);
  p.convection = 1;
  const auto ms = midpoint_system(assemble_stokes_like(p), 1e-3);
  for (auto _ : state) {
    auto sf = hs_staircase(ms.sys.h(), ms.sys.s());
    benchmark::DoNotOptimize(sf.u.data());
  }
  state.counters["n"] = static_cast<double>(ms.sys.size());
}
BENCHMARK(BM_StokesStaircase)->Arg(4)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_MidpointSteps(benchmark::State& state) {
  const auto sys = spring_chain(100);
  const Vector x0 = random_vector(sys.order(), 3);
  const auto solver = static_cast<StepSolver>(state.range(0));
  for (auto _ : state) {
    auto traj = integrate(sys, x0, 1e-3, 20, solver);
    benchmark::DoNotOptimize(traj.states.back().data());
  }
  state.SetLabel(std::string(to_string(solver)));
}
BENCHMARK(BM_MidpointSteps)
    ->Arg(static_cast<int>(StepSolver::Direct))
    ->Arg(static_cast<int>(StepSolver::Rapoport))
    ->Arg(static_cast<int>(StepSolver::Gmres))
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
