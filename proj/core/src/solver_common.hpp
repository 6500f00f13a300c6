#pragma once

#include <chrono>
#include <cmath>

#include "dhkrylov/krylov.hpp"

namespace dhk::detail {

// Records the residual metrics of each iterate into a SolveReport.
class IterateRecorder {
 public:
  IterateRecorder(SolveReport& rep, const SolverOptions& opts,
                  const LinearOperator& apply_a, const Vector& b,
                  LinearOperator solve_h = {}, LinearOperator apply_h = {})
      : rep_(rep),
        opts_(opts),
        apply_a_(apply_a),
        b_(b),
        solve_h_(std::move(solve_h)),
        apply_h_(std::move(apply_h)),
        start_(std::chrono::steady_clock::now()) {
    rep_.b_norm = b.norm();
    if (opts_.reference && opts_.reference->size() != b.size()) {
      throw DimensionError("SolverOptions::reference has wrong length");
    }
  }

  // Returns ||b - A x||_2 / ||b||_2 (0 when b = 0).
  Real record(const Vector& x) {
    Vector r = b_ - apply_a_(x);
    const Real rn = r.norm();
    rep_.residual_2norm.push_back(rn);
    if (opts_.track_hinv_norm && solve_h_) {
      const Vector z = solve_h_(r);
      rep_.residual_hinv_norm.push_back(
          std::sqrt(std::max(Real(0), std::real(r.dot(z)))));
    }
    if (opts_.reference && apply_h_) {
      const Vector e = *opts_.reference - x;
      rep_.error_h_norm.push_back(
          std::sqrt(std::max(Real(0), std::real(e.dot(apply_h_(e))))));
    }
    if (opts_.keep_iterates) rep_.iterates.push_back(x);
    return rep_.b_norm > 0 ? rn / rep_.b_norm : Real(0);
  }

  bool done(Real rel) const { return rel <= opts_.tol; }

  void finish(Vector x, Index iterations, bool converged) {
    rep_.solution = std::move(x);
    rep_.iterations = iterations;
    rep_.converged = converged;
    rep_.wall_time = std::chrono::duration<double>(
                         std::chrono::steady_clock::now() - start_)
                         .count();
  }

 private:
  SolveReport& rep_;
  const SolverOptions& opts_;
  const LinearOperator& apply_a_;
  const Vector& b_;
  LinearOperator solve_h_;
  LinearOperator apply_h_;
  std::chrono::steady_clock::time_point start_;
};

inline void require_rhs(Index n, const Vector& b, const char* who) {
  if (b.size() != n) {
    throw DimensionError(std::string(who) + ": right-hand side has wrong length");
  }
}

}  // namespace dhk::detail
