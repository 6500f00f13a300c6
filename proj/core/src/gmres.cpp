#include <cmath>

#include "dhkrylov/krylov.hpp"
#include "solver_common.hpp"

namespace dhk {

namespace {

SolveReport gmres_impl(const LinearOperator& a, const Vector& b,
                       const SolverOptions& opts, const LinearOperator& precond,
                       const LinearOperator& hinv_solve,
                       const LinearOperator& apply_h) {
  if (!a) throw ContractError("solve_gmres: empty operator");
  const Index n = b.size();
  SolveReport rep;
  rep.method = precond ? "lgmres" : "gmres";
  detail::IterateRecorder rec(rep, opts, a, b, hinv_solve, apply_h);
  Vector x = Vector::Zero(n);
  const Real rel0 = rec.record(x);
  const Vector r0 = precond ? precond(b) : b;
  if (precond) rep.preconditioned_residual.push_back(r0.norm());
  if (rec.done(rel0)) {
    rec.finish(x, 0, true);
    return rep;
  }

  const Index m = opts.maxit;
  std::vector<Vector> v;
  v.reserve(static_cast<std::size_t>(m) + 1);
  const Real beta = r0.norm();
  v.push_back(r0 / beta);
  Matrix hess = Matrix::Zero(m + 1, m);
  std::vector<Real> cs(static_cast<std::size_t>(m));
  std::vector<Scalar> sn(static_cast<std::size_t>(m));
  Vector g = Vector::Zero(m + 1);
  g(0) = beta;

  Real rel = rel0;
  Index k = 0;
  for (; k < m;) {
    Vector w = a(v[k]);
    if (precond) w = precond(w);
    const Real w_norm0 = w.norm();
    for (Index j = 0; j <= k; ++j) {
      hess(j, k) = v[j].dot(w);
      w -= hess(j, k) * v[j];
    }
    const Real h_next = w.norm();
    hess(k + 1, k) = h_next;

    for (Index j = 0; j < k; ++j) {
      const Scalar t = cs[j] * hess(j, k) + sn[j] * hess(j + 1, k);
      hess(j + 1, k) = -sconj(sn[j]) * hess(j, k) + cs[j] * hess(j + 1, k);
      hess(j, k) = t;
    }
    const Scalar delta = hess(k, k);
    const Real ad = std::abs(delta);
    if (h_next == 0) {
      cs[k] = 1;
      sn[k] = 0;
    } else if (ad == 0) {
      cs[k] = 0;
      sn[k] = 1;
      hess(k, k) = h_next;
    } else {
      const Real rho = std::hypot(ad, h_next);
      const Scalar phase = delta / ad;
      cs[k] = ad / rho;
      sn[k] = phase * h_next / rho;
      hess(k, k) = phase * rho;
    }
    hess(k + 1, k) = 0;
    g(k + 1) = -sconj(sn[k]) * g(k);
    g(k) = cs[k] * g(k);
    ++k;

    const Vector y = hess.topLeftCorner(k, k)
                         .triangularView<Eigen::Upper>()
                         .solve(g.head(k));
    x.setZero();
    for (Index j = 0; j < k; ++j) x += y(j) * v[j];
    rel = rec.record(x);
    if (precond) {
      const Vector r = b - a(x);
      rep.preconditioned_residual.push_back(precond(r).norm());
    }
    if (opts.keep_basis) rep.basis.push_back(v[k - 1]);
    if (rec.done(rel)) break;
    if (h_next <= 1e-14 * w_norm0) {
      rep.breakdown = k;
      break;
    }
    v.push_back(w / h_next);
  }
  rec.finish(std::move(x), k, rec.done(rel));
  return rep;
}

}  // namespace

SolveReport solve_gmres(const LinearOperator& a, const Vector& b,
                        const SolverOptions& opts,
                        const LinearOperator& precond,
                        const LinearOperator& hinv_solve) {
  return gmres_impl(a, b, opts, precond, hinv_solve, {});
}

SolveReport solve_gmres(const HsSplitSystem& sys, const Vector& b,
                        const SolverOptions& opts) {
  detail::require_rhs(sys.size(), b, "solve_gmres");
  const HsOperators ops = make_operators(sys);
  return gmres_impl(ops.apply_a, b, opts, {}, ops.solve_h,
                    ops.solve_h ? ops.apply_h : LinearOperator{});
}

SolveReport solve_lgmres(const HsSplitSystem& sys, const Vector& b,
                         const SolverOptions& opts) {
  detail::require_rhs(sys.size(), b, "solve_lgmres");
  sys.h_factor();
  const HsOperators ops = make_operators(sys);
  return gmres_impl(ops.apply_a, b, opts, ops.solve_h, ops.solve_h,
                    ops.apply_h);
}

}  // namespace dhk
