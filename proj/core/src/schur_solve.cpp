#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "dhkrylov/krylov.hpp"

namespace dhk {

namespace {

constexpr Real kRankTol = 1e-10;
constexpr Real kInnerTighten = 1e-2;

class InnerSolver {
 public:
  InnerSolver(const HsSplitSystem& sys, Method method,
              const SolverOptions& opts, Real alpha, SchurSolveReport& rep,
              Real tol_factor = 1)
      : sys_(sys), method_(method), alpha_(alpha), rep_(rep) {
    opts_.tol = opts.tol * tol_factor;
    opts_.maxit = opts.maxit;
    opts_.track_hinv_norm = false;
  }

  Vector operator()(const Vector& rhs) {
    ++rep_.inner_solves;
    if (rhs.norm() == 0) return Vector::Zero(rhs.size());
    SolveReport r = solve(method_, sys_, rhs, opts_, alpha_);
    rep_.inner_iterations += r.iterations;
    rep_.max_inner_relative_residual =
        std::max(rep_.max_inner_relative_residual, r.relative_residual());
    if (!r.converged) {
      std::ostringstream os;
      os << "solve_via_schur: inner " << to_string(method_) << " solve #"
         << rep_.inner_solves << " stopped after " << r.iterations
         << " iterations at relative residual " << r.relative_residual();
      throw ConvergenceError(os.str());
    }
    return r.solution;
  }

 private:
  const HsSplitSystem& sys_;
  Method method_;
  Real alpha_;
  SolverOptions opts_;
  SchurSolveReport& rep_;
};

}  // namespace

SchurSolveReport solve_via_schur(const Matrix& a, const Matrix& b,
                                 const Vector& f, const Vector& g,
                                 Method method, const SolverOptions& opts,
                                 Real hss_alpha) {
  const Index nv = a.rows();
  const Index np = b.cols();
  if (a.cols() != nv || b.rows() != nv || f.size() != nv || g.size() != np) {
    throw DimensionError("solve_via_schur: block shapes do not conform");
  }
  const HsSplitSystem asys(a);
  if (!asys.has_h_factor()) {
    throw ContractError(
        "solve_via_schur: A must have a positive definite Hermitian part");
  }

  SchurSolveReport rep;
  InnerSolver inner(asys, method, opts, hss_alpha, rep);

  if (np == 0) {
    rep.v = inner(f);
    rep.p = Vector::Zero(0);
    rep.outer.method = std::string(to_string(method));
    rep.outer.converged = true;
  } else {
    Eigen::BDCSVD<Matrix> svd(b);
    const auto& sv = svd.singularValues();
    Index rank = 0;
    for (Index i = 0; i < sv.size(); ++i) rank += sv(i) > kRankTol * sv(0);
    if (rank < np) {
      throw RankError("solve_via_schur: B does not have full column rank", rank);
    }

    const Vector s_rhs = g + b.adjoint() * inner(f);
    if (method == Method::Gmres) {
      // Matrix-free: every outer step applies B* A^{-1} B with one inner solve.
      // The outer residual cannot drop below the accuracy of the operator
      // applications, so those inner solves run at a tighter tolerance.
      InnerSolver tight(asys, method, opts, hss_alpha, rep, kInnerTighten);
      const LinearOperator schur_op = [&](const Vector& p) -> Vector {
        return b.adjoint() * tight(b * p);
      };
      rep.outer = solve_gmres(schur_op, s_rhs, opts);
    } else {
      // The three-term methods and HSS need the Hermitian part of the Schur
      // complement, so it is assembled column by column.
      Matrix x(nv, np);
      for (Index j = 0; j < np; ++j) x.col(j) = inner(b.col(j));
      const HsSplitSystem schur(Matrix(b.adjoint() * x));
      if (!schur.has_h_factor()) {
        throw DiagnosticsError(
            "solve_via_schur: Schur complement lost positive definiteness", 1);
      }
      rep.outer = solve(method, schur, s_rhs, opts, hss_alpha);
    }
    rep.p = rep.outer.solution;
    rep.v = inner(f - b * rep.p);
  }

  rep.solution.resize(nv + np);
  rep.solution << rep.v, rep.p;
  const Vector r1 = f - a * rep.v - b * rep.p;
  const Vector r2 = g + b.adjoint() * rep.v;
  const Real rhs_norm = std::sqrt(f.squaredNorm() + g.squaredNorm());
  const Real res = std::sqrt(r1.squaredNorm() + r2.squaredNorm());
  rep.full_relative_residual = rhs_norm > 0 ? res / rhs_norm : res;
  rep.converged = rep.outer.converged;
  return rep;
}

SchurSolveReport solve_singular_hermitian_part(const HsSplitSystem& sys,
                                               const Vector& rhs, Method method,
                                               const SolverOptions& opts,
                                               Real hss_alpha) {
  const Index n = sys.size();
  if (rhs.size() != n) {
    throw DimensionError("solve_singular_hermitian_part: size mismatch");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(sys.h());
  const RealVector& ev = es.eigenvalues();
  const Real hmax = n > 0 ? ev.cwiseAbs().maxCoeff() : Real(0);
  if (n > 0 && ev(0) < -kRankTol * hmax) {
    throw ContractError(
        "solve_singular_hermitian_part: Hermitian part is indefinite");
  }
  Index m = 0;
  while (m < n && ev(m) <= kRankTol * hmax) ++m;
  if (m == n) {
    throw ContractError("solve_singular_hermitian_part: Hermitian part is zero");
  }

  // Columns ordered as [range(H), ker(H)].
  Matrix q(n, n);
  q << es.eigenvectors().rightCols(n - m), es.eigenvectors().leftCols(m);
  const Matrix t = q.adjoint() * sys.a() * q;
  const Index n1 = n - m;
  const Real t22 = max_abs(t.bottomRightCorner(m, m));
  if (t22 > kRankTol * max_abs(t)) {
    std::ostringstream os;
    os << "solve_singular_hermitian_part: the skew part does not vanish on "
          "ker(H) (max entry "
       << t22 << "); the pencil needs the full staircase reduction";
    throw ContractError(os.str());
  }
  const Vector qr = q.adjoint() * rhs;
  SchurSolveReport rep =
      solve_via_schur(t.topLeftCorner(n1, n1), t.topRightCorner(n1, m),
                      qr.head(n1), qr.tail(m), method, opts, hss_alpha);
  rep.solution = q * rep.solution;
  const Real rn = rhs.norm();
  const Real res = (rhs - sys.a() * rep.solution).norm();
  rep.full_relative_residual = rn > 0 ? res / rn : res;
  return rep;
}

}  // namespace dhk
