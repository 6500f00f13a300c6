#include "dhkrylov/hs_core.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

namespace dhk {

namespace {

void require_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols()) {
    std::ostringstream os;
    os << what << ": expected a square matrix, got " << m.rows() << "x"
       << m.cols();
    throw DimensionError(os.str());
  }
}

}  // namespace

HsParts split_hs(const Matrix& a) {
  require_square(a, "split_hs");
  Matrix at = a.adjoint();
  return {Real(0.5) * (a + at), Real(0.5) * (a - at)};
}

bool is_hermitian(const Matrix& m, Real tol) {
  if (m.rows() != m.cols()) return false;
  return max_abs(m - m.adjoint()) <= tol * max_abs(m);
}

bool is_skew_hermitian(const Matrix& m, Real tol) {
  if (m.rows() != m.cols()) return false;
  return max_abs(m + m.adjoint()) <= tol * max_abs(m);
}

std::string_view to_string(Definiteness d) {
  switch (d) {
    case Definiteness::PositiveDefinite:
      return "PositiveDefinite";
    case Definiteness::PositiveSemidefinite:
      return "PositiveSemidefinite";
    case Definiteness::Indefinite:
      return "Indefinite";
  }
  return "?";
}

DefinitenessInfo definiteness_info(const Matrix& h, Real tol) {
  require_square(h, "definiteness_class");
  if (!is_hermitian(h, tol)) {
    throw StructureError("definiteness_class: matrix is not Hermitian");
  }
  DefinitenessInfo info;
  if (h.rows() == 0) {
    info.cls = Definiteness::PositiveDefinite;
    return info;
  }
  // Symmetrize exactly so the eigensolver sees a Hermitian input.
  Matrix hs = Real(0.5) * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(hs, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  info.min_eigenvalue = ev.minCoeff();
  info.max_eigenvalue = ev.maxCoeff();
  info.norm2 = std::max(std::abs(info.min_eigenvalue),
                        std::abs(info.max_eigenvalue));
  const Real threshold = tol * info.norm2;
  if (info.min_eigenvalue > threshold) {
    info.cls = Definiteness::PositiveDefinite;
  } else if (info.min_eigenvalue >= -threshold) {
    info.cls = Definiteness::PositiveSemidefinite;
  } else {
    info.cls = Definiteness::Indefinite;
  }
  return info;
}

HermitianFactor::HermitianFactor(const Matrix& h) {
  require_square(h, "HermitianFactor");
  llt_.compute(h);
  if (llt_.info() != Eigen::Success) {
    throw ContractError(
        "HermitianFactor: Cholesky factorization failed, matrix is not "
        "Hermitian positive definite");
  }
}

Vector HermitianFactor::solve(const Vector& b) const {
  if (b.size() != llt_.rows()) {
    throw DimensionError("HermitianFactor::solve: size mismatch");
  }
  return llt_.solve(b);
}

Matrix HermitianFactor::solve(const Matrix& b) const {
  if (b.rows() != llt_.rows()) {
    throw DimensionError("HermitianFactor::solve: size mismatch");
  }
  return llt_.solve(b);
}

Matrix HermitianFactor::lower() const { return llt_.matrixL(); }

Scalar h_inner(const Vector& x, const Vector& y, const Matrix& h) {
  require_square(h, "h_inner");
  if (x.size() != h.rows() || y.size() != h.rows()) {
    throw DimensionError("h_inner: vector size does not match h");
  }
  if (!is_hermitian(h) ||
      Eigen::LLT<Matrix>(h).info() != Eigen::Success) {
    throw ContractError("h_inner: h is not Hermitian positive definite");
  }
  return y.dot(h * x);
}

Real h_norm_unchecked(const Vector& x, const Matrix& h) {
  return std::sqrt(std::max(Real(0), std::real(x.dot(h * x))));
}

HsSplitSystem::HsSplitSystem(const Matrix& a, Real tol)
    : HsSplitSystem([&] {
        auto parts = split_hs(a);
        return HsSplitSystem(a, std::move(parts.h), std::move(parts.s), tol);
      }()) {}

HsSplitSystem HsSplitSystem::from_parts(Matrix h, Matrix s, Real tol) {
  require_square(h, "HsSplitSystem::from_parts");
  if (s.rows() != h.rows() || s.cols() != h.cols()) {
    throw DimensionError("HsSplitSystem::from_parts: h and s differ in shape");
  }
  if (!is_hermitian(h, tol)) {
    throw StructureError("HsSplitSystem::from_parts: h is not Hermitian");
  }
  if (!is_skew_hermitian(s, tol)) {
    throw StructureError(
        "HsSplitSystem::from_parts: s is not skew-Hermitian");
  }
  Matrix a = h + s;
  return HsSplitSystem(std::move(a), std::move(h), std::move(s), tol);
}

HsSplitSystem::HsSplitSystem(Matrix a, Matrix h, Matrix s, Real tol)
    : a_(std::move(a)), h_(std::move(h)), s_(std::move(s)), tol_(tol) {
  info_ = dhk::definiteness_info(h_, tol_);
  if (info_.cls == Definiteness::PositiveDefinite) {
    factor_ = std::make_shared<const HermitianFactor>(h_);
  }
}

const HermitianFactor& HsSplitSystem::h_factor() const {
  if (!factor_) {
    throw ContractError(
        "HsSplitSystem: Hermitian part is not positive definite (" +
        std::string(to_string(info_.cls)) + "); no factorization available");
  }
  return *factor_;
}

Vector direct_solve(const Matrix& a, const Vector& b) {
  require_square(a, "direct_solve");
  if (b.size() != a.rows()) {
    throw DimensionError("direct_solve: size mismatch");
  }
  return a.partialPivLu().solve(b);
}

Vector refined_solve(const Matrix& a, const Vector& b, int sweeps) {
  require_square(a, "refined_solve");
  if (b.size() != a.rows()) {
    throw DimensionError("refined_solve: size mismatch");
  }
  using Wide = std::conditional_t<kComplexScalar, std::complex<long double>,
                                  long double>;
  using WideMatrix = Eigen::Matrix<Wide, Eigen::Dynamic, Eigen::Dynamic>;
  using WideVector = Eigen::Matrix<Wide, Eigen::Dynamic, 1>;

  Eigen::PartialPivLU<Matrix> lu(a);
  const WideMatrix aw = a.cast<Wide>();
  const WideVector bw = b.cast<Wide>();
  WideVector x = lu.solve(b).cast<Wide>();
  for (int i = 0; i < sweeps; ++i) {
    WideVector r = bw - aw * x;
    Vector rd = r.template cast<Scalar>();
    x += lu.solve(rd).cast<Wide>();
  }
  return x.template cast<Scalar>();
}

Real norm2(const Matrix& m) {
  if (m.size() == 0) return 0;
  Eigen::BDCSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

}  // namespace dhk
