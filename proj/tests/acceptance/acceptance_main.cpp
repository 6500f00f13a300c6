// Acceptance run: one PASS/FAIL line per criterion, followed by the measured
// quantities behind the verdict. Exit status is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "dhkrylov/bounds.hpp"
#include "dhkrylov/dhdae.hpp"
#include "dhkrylov/krylov.hpp"
#include "dhkrylov/staircase.hpp"
#include "dhkrylov/timestep.hpp"
#include "oracles.hpp"

namespace {

using namespace dhk;
using dhk::testing::Rng;

struct Outcome {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      if (ok) detail << "first failure: " << what << "; ";
      ok = false;
    }
  }
};

struct Criterion {
  int id;
  const char* name;
  double time_limit;
  std::function<void(Outcome&)> body;
};

Real log_uniform(Rng& rng, Real lo, Real hi) {
  std::uniform_real_distribution<Real> u(std::log(lo), std::log(hi));
  return std::exp(u(rng));
}

Index uniform_index(Rng& rng, Index lo, Index hi) {
  std::uniform_int_distribution<Index> u(lo, hi);
  return u(rng);
}

Real alpha_geometric_mean(const HsSplitSystem& sys) {
  const auto& info = sys.definiteness_info();
  return std::sqrt(info.min_eigenvalue * info.max_eigenvalue);
}

// 1
void factor_anchors(Outcome& out) {
  const Real w = widlund_factor(0.239);
  const Real r = rapoport_factor(0.239);
  out.require(std::abs(w - 0.0139) <= 5e-5, "widlund factor");
  out.require(std::abs(r - 0.1179) <= 5e-5, "rapoport factor");
  out.detail << "widlund " << w << ", rapoport " << r;
}

// 2
void bound_domination(Outcome& out) {
  Rng rng(0xB0B0);
  Real worst_w = 0, worst_r = 0;
  Real lmin = 1e300, lmax = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const Index n = uniform_index(rng, 20, 100);
    const Real cond = log_uniform(rng, 1, 1e4);
    const Real lambda_target = log_uniform(rng, 0.05, 5);
    const auto sys = dhk::testing::random_system(n, cond, lambda_target, rng);
    const Vector b = dhk::testing::random_vector(n, rng);
    const Real lambda = spectral_interval(sys).lambda;
    lmin = std::min(lmin, lambda);
    lmax = std::max(lmax, lambda);
    SolverOptions opts;
    opts.reference = refined_solve(sys.a(), b);

    const auto wid = solve_widlund(sys, b, opts);
    const Real e0 = wid.error_h_norm[0];
    for (std::size_t k = 2; k < wid.error_h_norm.size(); k += 2) {
      const Real ratio = (wid.error_h_norm[k] / e0) /
                         widlund_bound(lambda, static_cast<Index>(k / 2));
      worst_w = std::max(worst_w, ratio);
      out.require(ratio <= 1 + 1e-6, "widlund trial " + std::to_string(trial) +
                                         " k " + std::to_string(k));
    }
    const auto rap = solve_rapoport(sys, b, opts);
    const Real r0 = rap.residual_hinv_norm[0];
    for (std::size_t k = 1; k < rap.residual_hinv_norm.size(); ++k) {
      const Real ratio = (rap.residual_hinv_norm[k] / r0) /
                         rapoport_bound(lambda, static_cast<Index>(k));
      worst_r = std::max(worst_r, ratio);
      out.require(ratio <= 1 + 1e-6, "rapoport trial " + std::to_string(trial) +
                                         " k " + std::to_string(k));
    }
  }
  out.detail << "lambda in [" << lmin << ", " << lmax
             << "], max error/bound widlund " << worst_w << ", rapoport "
             << worst_r;
}

// 3
void oracle_equivalence(Outcome& out) {
  Rng rng(0xC3C3);
  Real worst_res = 0, worst_err = 0;
  Index hss_max_it = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const Index n = uniform_index(rng, 10, 60);
    const Real cond = log_uniform(rng, 1, 1e3);
    const Real lambda = log_uniform(rng, 0.1, 5);
    const auto sys = dhk::testing::random_system(n, cond, lambda, rng);
    const Vector b = dhk::testing::random_vector(n, rng);
    const Vector x = refined_solve(sys.a(), b);
    for (Method m : all_methods()) {
      SolverOptions opts;
      if (m == Method::Hss) opts.maxit = 5000;
      const auto rep = solve(m, sys, b, opts, alpha_geometric_mean(sys));
      const Real res = rep.relative_residual();
      const Real err = (rep.solution - x).norm() / x.norm();
      worst_res = std::max(worst_res, res);
      worst_err = std::max(worst_err, err);
      if (m == Method::Hss) hss_max_it = std::max(hss_max_it, rep.iterations);
      const std::string tag =
          std::string(to_string(m)) + " trial " + std::to_string(trial);
      out.require(res <= 1e-10, tag + " residual");
      out.require(err <= 1e-7, tag + " error");
    }
  }
  out.detail << "max relative residual " << worst_res << ", max error "
             << worst_err << ", hss iterations up to " << hss_max_it;
}

// 4
void minimization_oracles(Outcome& out) {
  Rng rng(0xD4D4);
  Real worst_r = 0, worst_g = 0;
  for (int trial = 0; trial < 3; ++trial) {
    const Index n = 30;
    const auto sys = dhk::testing::random_system(n, 1e2, 1 + trial, rng);
    const Vector b = dhk::testing::random_vector(n, rng);
    SolverOptions opts;
    opts.keep_iterates = true;
    const Matrix k = sys.h().llt().solve(sys.s());
    const Vector bhat = sys.h().llt().solve(b);
    Eigen::LLT<Matrix> llt(sys.h());
    const Matrix l = llt.matrixL();
    const Matrix linv = l.triangularView<Eigen::Lower>().solve(
        Matrix(Matrix::Identity(n, n)));
    const auto rap = solve_rapoport(sys, b, opts);
    const auto gm = solve_gmres(sys, b, opts);
    for (Index j = 1; j <= 15; ++j) {
      if (j < Index(rap.iterates.size())) {
        const Matrix w = dhk::testing::krylov_basis(k, bhat, j);
        const Vector z = dhk::testing::subspace_minimizer(sys.a(), b, w, linv);
        const Real d = (rap.iterates[j] - z).norm() / z.norm();
        worst_r = std::max(worst_r, d);
        out.require(d <= 1e-8, "rapoport k " + std::to_string(j));
      }
      if (j < Index(gm.iterates.size())) {
        const Matrix w = dhk::testing::krylov_basis(sys.a(), b, j);
        const Vector z = dhk::testing::subspace_minimizer(
            sys.a(), b, w, Matrix::Identity(n, n));
        const Real d = (gm.iterates[j] - z).norm() / z.norm();
        worst_g = std::max(worst_g, d);
        out.require(d <= 1e-8, "gmres k " + std::to_string(j));
      }
    }
  }
  out.detail << "max relative deviation rapoport " << worst_r << ", gmres "
             << worst_g;
}

// 5
void lanczos_structure(Outcome& out) {
  Rng rng(0xE5E5);
  Real worst_orth = 0, worst_skew = 0, worst_projection = 0;
  Index first_loss = 1000;
  for (int trial = 0; trial < 6; ++trial) {
    const Index n = 80;
    const auto sys = dhk::testing::random_system(
        n, trial < 3 ? 10.0 : 100.0, 0.5 + trial % 3, rng);
    const auto ops = make_operators(sys);
    auto st = lanczos_start(ops, dhk::testing::random_vector(n, rng));
    std::vector<Vector> cols;
    while (st.k < 50 && !st.breakdown) {
      lanczos_advance(st, ops);
      cols.push_back(st.v_curr);
    }
    Matrix v(n, static_cast<Index>(cols.size()));
    for (std::size_t i = 0; i < cols.size(); ++i) v.col(Index(i)) = cols[i];
    const Matrix gram = v.adjoint() * sys.h() * v;
    const Real orth = max_abs(Matrix(gram - Matrix::Identity(v.cols(), v.cols())));
    for (Index m = 1; m <= v.cols(); ++m) {
      if (max_abs(Matrix(gram.topLeftCorner(m, m) - Matrix::Identity(m, m))) > 1e-8) {
        first_loss = std::min(first_loss, m);
        break;
      }
    }
    const Index k = st.k;
    Matrix t = Matrix::Zero(k, k);
    for (Index j = 0; j < k; ++j) {
      t(j, j) = st.t_diag[j];
      if (j + 1 < k) {
        t(j + 1, j) = st.t_sub[j];
        t(j, j + 1) = -st.t_sub[j];
      }
    }
    const Real skew = max_abs(Matrix(t + t.adjoint()));
    // Informational: T recovered from the basis, V_k* S V_k.
    const Matrix t_from_basis = v.adjoint() * sys.s() * v;
    worst_projection = std::max(worst_projection, max_abs(Matrix(t - t_from_basis)));
    worst_orth = std::max(worst_orth, orth);
    worst_skew = std::max(worst_skew, skew);
    out.require(orth <= 1e-8, "orthonormality trial " + std::to_string(trial));
    out.require(skew <= 1e-10, "skew tridiagonal trial " + std::to_string(trial));
  }
  out.detail << "max ||V*HV - I||_max " << worst_orth
             << ", max ||T + T*||_max " << worst_skew
             << ", max ||T - V*SV||_max " << worst_projection;
  if (first_loss < 1000) {
    out.detail << "; orthonormality first exceeds 1e-8 at k = " << first_loss;
  }
}

// 6
void staircase_and_schur(Outcome& out) {
  Rng rng(0xF6F6);
  Real worst_rec = 0, min_eig = 1e300;
  Index max_blocks = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = uniform_index(rng, 4, 40);
    const Index rank = uniform_index(rng, 1, n - 1);
    const Matrix h = dhk::testing::random_psd(n, rank, rng);
    const Matrix s = dhk::testing::random_skew(n, rng, log_uniform(rng, 0.1, 10));
    const std::string tag = "trial " + std::to_string(trial);
    try {
      const auto sf = hs_staircase(h, s);
      const auto res = staircase_residuals(sf, h, s);
      worst_rec = std::max(worst_rec, res.reconstruction);
      out.require(res.reconstruction <= 1e-10, tag + " reconstruction");
      for (Index i = 1; i + 1 < sf.num_blocks(); ++i) {
        out.require(sf.block_sizes[i] <= sf.block_sizes[i - 1],
                    tag + " block sizes");
      }
      max_blocks = std::max(max_blocks, sf.num_blocks());
      const auto red = schur_block_diagonalize(sf);
      for (std::size_t i = 0; i < red.min_hermitian_eigenvalues.size(); ++i) {
        if (red.has_final_skew_block && i + 1 == red.blocks.size()) continue;
        const Real l = red.min_hermitian_eigenvalues[i];
        min_eig = std::min(min_eig, l);
        out.require(l > 0, tag + " Schur complement " + std::to_string(i));
      }
    } catch (const dhk::Error& e) {
      out.require(false, tag + ": " + e.what());
    }
  }
  out.detail << "max relative reconstruction " << worst_rec
             << ", smallest Hermitian-part eigenvalue " << min_eig
             << ", up to " << max_blocks << " blocks";
}

// 7
void index_classification(Outcome& out) {
  Rng rng(0x0707);
  const Index n = 8;
  struct Case {
    const char* name;
    DhDaeSystem sys;
    DaeIndex expected;
  };
  StokesLikeParameters stab;
  stab.grid_n = 6;
  stab.convection = 1;
  stab.stabilization = 0.1;
  StokesLikeParameters unstab = stab;
  unstab.stabilization = 0;
  const Matrix a = dhk::testing::random_hpd(n, 10, rng);
  const Matrix m = dhk::testing::random_hpd(4, 10, rng);
  const Matrix k = dhk::testing::random_psd(4, 2, rng);
  const Matrix d = dhk::testing::random_matrix(4, n, rng);
  std::vector<Case> cases;
  cases.push_back({"mechanical",
                   assemble_mechanical(dhk::testing::random_hpd(n, 10, rng),
                                       dhk::testing::random_psd(n, 3, rng),
                                       dhk::testing::random_hpd(n, 10, rng)),
                   DaeIndex::Zero});
  cases.push_back({"poroelastic",
                   assemble_poroelastic(a, m, 1e-3 * dhk::testing::random_hpd(n, 2, rng),
                                        k, d, false),
                   DaeIndex::Zero});
  cases.push_back({"rlc", assemble_rlc({}), DaeIndex::One});
  cases.push_back({"stokes stabilized", assemble_stokes_like(stab), DaeIndex::One});
  cases.push_back({"poroelastic quasi-stationary",
                   assemble_poroelastic(a, m, Matrix(), k, d, true), DaeIndex::Two});
  cases.push_back({"stokes unstabilized", assemble_stokes_like(unstab),
                   DaeIndex::Two});
  for (const auto& c : cases) {
    const auto rep = index_classify(c.sys);
    out.detail << c.name << " -> " << to_string(rep.index) << "; ";
    out.require(rep.regular && rep.index == c.expected, c.name);
  }
}

// 8
void energy_identity(Outcome& out) {
  Rng rng(0x0808);
  const Index n = 15;
  const Matrix mass = dhk::testing::random_hpd(n, 10, rng);
  const Matrix stiff = dhk::testing::random_hpd(n, 100, rng);
  const Matrix damp = dhk::testing::random_psd(n, 5, rng);
  const Vector x0 = dhk::testing::random_vector(2 * n, rng);
  const Real tau = 0.05;

  const auto damped = assemble_mechanical(mass, damp, stiff);
  const auto traj = integrate(damped, x0, tau, 200, StepSolver::Rapoport);
  Real worst = 0;
  for (std::size_t k = 1; k < traj.states.size(); ++k) {
    const Real dha = traj.hamiltonians[k] - traj.hamiltonians[k - 1];
    const Real rel =
        std::abs(dha + traj.dissipation[k]) / traj.hamiltonians[k - 1];
    worst = std::max(worst, rel);
  }
  out.require(worst <= 1e-10, "dissipation identity");

  const auto undamped = assemble_mechanical(mass, Matrix::Zero(n, n), stiff);
  const auto cons = integrate(undamped, x0, tau, 200, StepSolver::Rapoport);
  Real drift = 0;
  for (Real ha : cons.hamiltonians) {
    drift = std::max(drift, std::abs(ha - cons.hamiltonians[0]) /
                                cons.hamiltonians[0]);
  }
  out.require(drift <= 1e-10, "conservation");
  out.detail << "max relative identity defect " << worst
             << ", max relative drift without damping " << drift;
}

// 9
void lambda_tau_scaling(Outcome& out) {
  Rng rng(0x0909);
  const Index n = 20;
  const Matrix mass = dhk::testing::random_hpd(n, 10, rng);
  const Matrix stiff = dhk::testing::random_hpd(n, 1e3, rng);
  const Matrix damp = dhk::testing::random_psd(n, n, rng);
  const auto undamped = assemble_mechanical(mass, Matrix::Zero(n, n), stiff);
  const auto damped = assemble_mechanical(mass, damp, stiff);
  auto lambda_at = [](const DhDaeSystem& s, Real tau) {
    return spectral_interval(midpoint_system(s, tau).sys).lambda;
  };
  Real worst = 0;
  for (Real tau : {1e-1, 1e-2, 1e-3}) {
    const Real ratio = lambda_at(undamped, tau / 10) / (lambda_at(undamped, tau) / 10);
    worst = std::max(worst, std::abs(ratio - 1));
  }
  out.require(worst <= 1e-10, "linear scaling without damping");
  const Real ratio = lambda_at(damped, 1e-3) / lambda_at(damped, 1e-4);
  out.require(ratio >= 9 && ratio <= 11, "damped ratio");
  out.detail << "undamped max relative deviation " << worst
             << ", damped lambda(1e-3)/lambda(1e-4) = " << ratio;
}

// 10
void stokes_gap(Outcome& out) {
  StokesLikeParameters p;
  p.grid_n = 16;
  p.viscosity = 10;
  p.convection = 1;
  p.stabilization = 1;
  const auto sys = assemble_stokes_like(p);
  Rng rng(0x1010);
  const Vector b = dhk::testing::random_vector(sys.order(), rng);
  SolverOptions opts;
  opts.track_hinv_norm = false;
  out.detail << "n = " << sys.order() << "; ";
  for (Real tau : {1e-3, 1e-4}) {
    const auto ms = midpoint_system(sys, tau);
    const auto gm = solve_gmres(ms.sys, b, opts);
    const auto wid = solve_widlund(ms.sys, b, opts);
    const auto rap = solve_rapoport(ms.sys, b, opts);
    out.detail << "tau " << tau << ": gmres " << gm.iterations << " it (rel "
               << gm.relative_residual() << "), widlund " << wid.iterations
               << ", rapoport " << rap.iterations << "; ";
    out.require(!gm.converged && gm.iterations == 250, "gmres stalls");
    out.require(wid.converged && wid.iterations <= 25, "widlund converges");
    out.require(rap.converged && rap.iterations <= 25, "rapoport converges");
  }
}

// 11
void schur_path(Outcome& out) {
  StokesLikeParameters p;
  p.grid_n = 16;
  p.viscosity = 1;
  p.convection = 1;
  const auto blk = stokes_like_blocks(p);
  const auto sys = assemble_stokes_like(p);
  const Real tau = 1e-3;
  const auto ms = midpoint_system(sys, tau);
  const Index nv = blk.n_velocity, np = blk.n_pressure;
  // Midpoint matrix in saddle form [[A, B^], [-B^*, 0]].
  const Matrix a = ms.sys.a().topLeftCorner(nv, nv);
  const Matrix bh = ms.sys.a().topRightCorner(nv, np);
  out.require(max_abs(Matrix(ms.sys.a().bottomLeftCorner(np, nv) + bh.adjoint())) == 0,
              "saddle structure");
  out.require(max_abs(ms.sys.a().bottomRightCorner(np, np)) == 0, "zero (2,2) block");
  Rng rng(0x1111);
  const Vector rhs = dhk::testing::random_vector(nv + np, rng);
  const auto rep = solve_via_schur(a, bh, rhs.head(nv), rhs.tail(np),
                                   Method::Widlund);
  const Real full = (rhs - ms.sys.a() * rep.solution).norm() / rhs.norm();
  out.require(full <= 1e-10, "full residual");
  out.detail << "n = " << nv + np << ", outer " << rep.outer.iterations
             << " it, " << rep.inner_solves << " inner solves ("
             << rep.inner_iterations << " it), full relative residual " << full;
}

// 12
void bendixson(Outcome& out) {
  Rng rng(0x1212);
  Real worst = 0, min_re = 1e300;
  for (int trial = 0; trial < 50; ++trial) {
    const Index n = uniform_index(rng, 2, 40);
    const bool positive_real = trial % 2 == 1;
    Matrix a = dhk::testing::random_matrix(n, n, rng);
    if (positive_real) {
      a = dhk::testing::random_hpd(n, log_uniform(rng, 1, 1e3), rng) +
          dhk::testing::random_skew(n, rng, log_uniform(rng, 0.1, 100));
    }
    const auto rep = bendixson_rectangle(HsSplitSystem(a));
    worst = std::max(worst, rep.max_violation);
    out.require(rep.contained, "containment trial " + std::to_string(trial));
    if (positive_real) {
      min_re = std::min(min_re, rep.min_real_part);
      out.require(rep.min_real_part > 0, "positive real trial " + std::to_string(trial));
    }
  }
  out.detail << "max violation " << worst
             << ", smallest real part with H > 0: " << min_re;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "convergence-factor anchors", 1, factor_anchors},
      {2, "bound domination", 30, bound_domination},
      {3, "oracle equivalence of all solvers", 30, oracle_equivalence},
      {4, "minimization oracles", 10, minimization_oracles},
      {5, "Lanczos structure", 10, lanczos_structure},
      {6, "staircase and Schur complements", 60, staircase_and_schur},
      {7, "index classification", 10, index_classification},
      {8, "energy dissipation identity", 5, energy_identity},
      {9, "lambda-tau scaling", 10, lambda_tau_scaling},
      {10, "GMRES gap on stabilized Stokes-like systems", 60, stokes_gap},
      {11, "Schur solve path", 30, schur_path},
      {12, "Bendixson containment", 10, bendixson},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Outcome out;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.body(out);
    } catch (const std::exception& e) {
      out.require(false, std::string("exception: ") + e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs >= c.time_limit) {
      out.require(false, "runtime limit " + std::to_string(c.time_limit) + " s");
    }
    failures += out.ok ? 0 : 1;
    std::printf("%s criterion %2d: %s (%.3f s)\n", out.ok ? "PASS" : "FAIL",
                c.id, c.name, secs);
    std::printf("    %s\n", out.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n",
              static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures;
}
