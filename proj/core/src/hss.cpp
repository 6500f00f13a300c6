#include <Eigen/Cholesky>
#include <Eigen/LU>

#include "dhkrylov/krylov.hpp"
#include "solver_common.hpp"

namespace dhk {

SolveReport solve_hss(const HsSplitSystem& sys, const Vector& b, Real alpha,
                      const SolverOptions& opts) {
  if (!(alpha > 0)) throw ContractError("solve_hss: alpha must be positive");
  const Index n = sys.size();
  detail::require_rhs(n, b, "solve_hss");
  const Matrix id = Matrix::Identity(n, n);

  Eigen::LLT<Matrix> shifted_h(alpha * id + sys.h());
  if (shifted_h.info() != Eigen::Success) {
    throw ContractError("solve_hss: alpha I + H is not positive definite");
  }
  // alpha I + S is nonsingular for alpha > 0: its eigenvalues are alpha + i t.
  Eigen::PartialPivLU<Matrix> shifted_s(alpha * id + sys.s());

  const HsOperators ops = make_operators(sys);
  SolveReport rep;
  rep.method = "hss";
  detail::IterateRecorder rec(rep, opts, ops.apply_a, b, ops.solve_h,
                              ops.solve_h ? ops.apply_h : LinearOperator{});
  Vector x = Vector::Zero(n);
  Real rel = rec.record(x);
  Index k = 0;
  while (!rec.done(rel) && k < opts.maxit) {
    const Vector half = shifted_h.solve(alpha * x - sys.s() * x + b);
    x = shifted_s.solve(alpha * half - sys.h() * half + b);
    ++k;
    rel = rec.record(x);
  }
  rec.finish(std::move(x), k, rec.done(rel));
  return rep;
}

}  // namespace dhk
