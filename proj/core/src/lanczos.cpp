#include <cmath>
#include <memory>

#include "dhkrylov/krylov.hpp"

namespace dhk {

namespace {

constexpr Real kBreakdownRatio = 1e-14;

}  // namespace

HsOperators make_operators(const HsSplitSystem& sys) {
  auto held = std::make_shared<const HsSplitSystem>(sys);
  HsOperators ops;
  ops.n = sys.size();
  ops.apply_a = [held](const Vector& x) -> Vector { return held->a() * x; };
  ops.apply_h = [held](const Vector& x) -> Vector { return held->h() * x; };
  ops.apply_s = [held](const Vector& x) -> Vector { return held->s() * x; };
  if (sys.has_h_factor()) {
    ops.solve_h = [held](const Vector& x) -> Vector {
      return held->h_factor().solve(x);
    };
  }
  return ops;
}

Real SolveReport::relative_residual() const {
  if (residual_2norm.empty()) return 0;
  return b_norm > 0 ? residual_2norm.back() / b_norm : Real(0);
}

LanczosState lanczos_start(const HsOperators& ops, const Vector& b,
                           bool reorthogonalize) {
  if (!ops.solve_h) {
    throw ContractError("H-Lanczos needs a positive definite Hermitian part");
  }
  if (b.size() != ops.n) throw DimensionError("lanczos_start: size mismatch");
  LanczosState st;
  st.reorthogonalize = reorthogonalize;
  const Vector bhat = ops.solve_h(b);
  // H * bhat is b itself, so no multiplication by H is needed.
  st.bhat_norm = std::sqrt(std::max(Real(0), std::real(bhat.dot(b))));
  if (st.bhat_norm == 0) {
    st.breakdown = true;
    st.v_next = Vector::Zero(ops.n);
    st.hv_next = Vector::Zero(ops.n);
    return st;
  }
  st.v_next = bhat / st.bhat_norm;
  st.hv_next = b / st.bhat_norm;
  return st;
}

void lanczos_advance(LanczosState& st, const HsOperators& ops) {
  if (st.breakdown) {
    throw ContractError("lanczos_advance: recurrence already terminated");
  }
  st.v_prev = std::move(st.v_curr);
  st.hv_prev = std::move(st.hv_curr);
  st.v_curr = std::move(st.v_next);
  st.hv_curr = std::move(st.hv_next);
  ++st.k;
  if (st.reorthogonalize) {
    st.basis.push_back(st.v_curr);
    st.h_basis.push_back(st.hv_curr);
  }

  // w = K v_k and H w = S v_k.
  Vector hw = ops.apply_s(st.v_curr);
  Vector w = ops.solve_h(hw);
  const Real kv_norm = std::sqrt(std::max(Real(0), std::real(w.dot(hw))));

  // v* S v is purely imaginary in exact arithmetic; drop the rounding.
  const Scalar t_kk = imag_part_only(st.v_curr.dot(hw));
  st.t_diag.push_back(t_kk);
  w -= t_kk * st.v_curr;
  hw -= t_kk * st.hv_curr;
  if (st.k > 1) {
    // t_{k-1,k} = -conj(t_{k,k-1}) and t_{k,k-1} is real.
    const Real gamma = st.t_sub[st.k - 2];
    w += gamma * st.v_prev;
    hw += gamma * st.hv_prev;
  }
  if (st.reorthogonalize) {
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t i = 0; i < st.basis.size(); ++i) {
        const Scalar c = st.h_basis[i].dot(w);
        w -= c * st.basis[i];
        hw -= c * st.h_basis[i];
      }
    }
  }

  const Real t_next = std::sqrt(std::max(Real(0), std::real(w.dot(hw))));
  if (kv_norm == 0 || t_next <= kBreakdownRatio * kv_norm) {
    st.breakdown = true;
    st.t_sub.push_back(0);
    st.v_next = Vector::Zero(ops.n);
    st.hv_next = Vector::Zero(ops.n);
    return;
  }
  st.t_sub.push_back(t_next);
  st.v_next = w / t_next;
  st.hv_next = hw / t_next;
}

}  // namespace dhk
