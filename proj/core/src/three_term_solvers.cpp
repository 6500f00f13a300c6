// Widlund's and Rapoport's methods on (I + K) x = H^{-1} b, both driven by
// the H-Lanczos recurrence and updated with short recurrences only.

#include <cmath>

#include "dhkrylov/krylov.hpp"
#include "solver_common.hpp"

namespace dhk {

namespace {

struct Rotation {
  Real c = 1;
  Scalar s = 0;

  // [a; b] -> [c a + s b; -conj(s) a + c b]
  void apply(Scalar& a, Scalar& b) const {
    const Scalar na = c * a + s * b;
    b = -sconj(s) * a + c * b;
    a = na;
  }
};

// Rotation zeroing gamma below delta; returns the new diagonal entry.
Rotation make_rotation(Scalar delta, Scalar gamma, Scalar& r) {
  Rotation g;
  const Real ad = std::abs(delta);
  const Real ag = std::abs(gamma);
  if (ag == 0) {
    g.c = 1;
    g.s = 0;
    r = delta;
    return g;
  }
  if (ad == 0) {
    g.c = 0;
    g.s = 1;
    r = gamma;
    return g;
  }
  const Real rho = std::hypot(ad, ag);
  const Scalar phase = delta / ad;
  g.c = ad / rho;
  g.s = phase * sconj(gamma) / rho;
  r = phase * rho;
  return g;
}

void require_h_solve(const HsOperators& ops, const char* who) {
  if (!ops.solve_h || !ops.apply_s || !ops.apply_a) {
    throw ContractError(std::string(who) +
                        ": Hermitian part must be positive definite");
  }
}

}  // namespace

SolveReport solve_widlund(const HsOperators& ops, const Vector& b,
                          const SolverOptions& opts) {
  require_h_solve(ops, "solve_widlund");
  detail::require_rhs(ops.n, b, "solve_widlund");
  SolveReport rep;
  rep.method = "widlund";
  detail::IterateRecorder rec(rep, opts, ops.apply_a, b, ops.solve_h,
                              ops.apply_h);
  Vector x = Vector::Zero(ops.n);
  if (rec.done(rec.record(x))) {
    rec.finish(x, 0, true);
    return rep;
  }

  LanczosState st = lanczos_start(ops, b, opts.reorthogonalize);
  // LU of the tridiagonal I + T_kk without pivoting; the pivots eta have
  // real part >= 1, so this never breaks down.
  Scalar eta = 0;
  Scalar zeta = 0;
  Vector p;
  Real rel = 1;
  Index k = 0;
  while (k < opts.maxit && !st.breakdown) {
    lanczos_advance(st, ops);
    ++k;
    const Scalar alpha = Scalar(1) + st.t_diag[k - 1];
    if (k == 1) {
      eta = alpha;
      zeta = st.bhat_norm;
      p = st.v_curr / eta;
    } else {
      const Real gamma = st.t_sub[k - 2];
      const Scalar beta = -gamma;
      const Scalar l = gamma / eta;
      eta = alpha - l * beta;
      zeta = -l * zeta;
      p = (st.v_curr - beta * p) / eta;
    }
    x += zeta * p;
    if (opts.keep_basis) rep.basis.push_back(st.v_curr);
    rel = rec.record(x);
    if (rec.done(rel)) break;
  }
  if (st.breakdown) rep.breakdown = st.k;
  rec.finish(std::move(x), k, rec.done(rel));
  return rep;
}

SolveReport solve_widlund(const HsSplitSystem& sys, const Vector& b,
                          const SolverOptions& opts) {
  sys.h_factor();
  return solve_widlund(make_operators(sys), b, opts);
}

SolveReport solve_rapoport(const HsOperators& ops, const Vector& b,
                           const SolverOptions& opts) {
  require_h_solve(ops, "solve_rapoport");
  detail::require_rhs(ops.n, b, "solve_rapoport");
  SolveReport rep;
  rep.method = "rapoport";
  detail::IterateRecorder rec(rep, opts, ops.apply_a, b, ops.solve_h,
                              ops.apply_h);
  Vector x = Vector::Zero(ops.n);
  if (rec.done(rec.record(x))) {
    rec.finish(x, 0, true);
    return rep;
  }

  LanczosState st = lanczos_start(ops, b, opts.reorthogonalize);
  Rotation g_prev2, g_prev1;
  Vector w_prev2 = Vector::Zero(ops.n);
  Vector w_prev1 = Vector::Zero(ops.n);
  Scalar g_top = st.bhat_norm;  // current entry k of the rotated rhs
  Real rel = 1;
  Index k = 0;
  while (k < opts.maxit && !st.breakdown) {
    lanczos_advance(st, ops);
    ++k;
    // Column k of the (k+1) x k matrix [I + T_kk; t_{k+1,k} e_k*].
    Scalar u_km2 = 0;
    Scalar u_km1 = k > 1 ? Scalar(-st.t_sub[k - 2]) : Scalar(0);
    Scalar u_k = Scalar(1) + st.t_diag[k - 1];
    const Scalar u_kp1 = st.t_sub[k - 1];
    if (k > 2) g_prev2.apply(u_km2, u_km1);
    if (k > 1) g_prev1.apply(u_km1, u_k);
    Scalar r_kk;
    const Rotation g = make_rotation(u_k, u_kp1, r_kk);

    Scalar g_next = 0;
    g.apply(g_top, g_next);

    Vector w = (st.v_curr - u_km1 * w_prev1 - u_km2 * w_prev2) / r_kk;
    x += g_top * w;
    if (opts.keep_basis) rep.basis.push_back(st.v_curr);

    w_prev2 = std::move(w_prev1);
    w_prev1 = std::move(w);
    g_prev2 = g_prev1;
    g_prev1 = g;
    g_top = g_next;

    rel = rec.record(x);
    if (rec.done(rel)) break;
  }
  if (st.breakdown) rep.breakdown = st.k;
  rec.finish(std::move(x), k, rec.done(rel));
  return rep;
}

SolveReport solve_rapoport(const HsSplitSystem& sys, const Vector& b,
                           const SolverOptions& opts) {
  sys.h_factor();
  return solve_rapoport(make_operators(sys), b, opts);
}

}  // namespace dhk
