#pragma once

#include <memory>
#include <optional>
#include <string_view>

#include <Eigen/Cholesky>

#include "dhkrylov/config.hpp"
#include "dhkrylov/errors.hpp"

namespace dhk {

/// Hermitian and skew-Hermitian parts of a square matrix, a = h + s.
struct HsParts {
  Matrix h;
  Matrix s;
};

/// h = (a + a*)/2, s = (a - a*)/2. Throws DimensionError for non-square a.
HsParts split_hs(const Matrix& a);

/// ||m - m*||_max <= tol * ||m||_max
bool is_hermitian(const Matrix& m, Real tol = kStructuralTol);
/// ||m + m*||_max <= tol * ||m||_max
bool is_skew_hermitian(const Matrix& m, Real tol = kStructuralTol);

enum class Definiteness { PositiveDefinite, PositiveSemidefinite, Indefinite };

std::string_view to_string(Definiteness d);

/// Spectral summary used for the definiteness decision.
struct DefinitenessInfo {
  Definiteness cls = Definiteness::Indefinite;
  Real min_eigenvalue = 0;
  Real max_eigenvalue = 0;
  Real norm2 = 0;
};

/// Classifies a Hermitian matrix by its smallest eigenvalue relative to
/// tol * ||h||_2. Throws StructureError if h is not Hermitian within tol.
DefinitenessInfo definiteness_info(const Matrix& h, Real tol = kStructuralTol);

inline Definiteness definiteness_class(const Matrix& h,
                                       Real tol = kStructuralTol) {
  return definiteness_info(h, tol).cls;
}

/// Cholesky factorization of a Hermitian positive definite matrix.
class HermitianFactor {
 public:
  /// Throws ContractError when the factorization breaks down (h not HPD).
  explicit HermitianFactor(const Matrix& h);

  Vector solve(const Vector& b) const;
  Matrix solve(const Matrix& b) const;

  /// Lower triangular factor L with h = L L*.
  Matrix lower() const;
  Index size() const { return llt_.rows(); }

 private:
  Eigen::LLT<Matrix> llt_;
};

/// x = h^{-1} b via the two triangular solves of the factorization.
inline Vector hermitian_solve(const HermitianFactor& factor, const Vector& b) {
  return factor.solve(b);
}

/// H-inner product <x, y>_H = y* h x. Throws ContractError if h is not
/// Hermitian positive definite, DimensionError on shape mismatch.
Scalar h_inner(const Vector& x, const Vector& y, const Matrix& h);

/// sqrt(x* h x) for an h already known to be HPD (no definiteness check).
Real h_norm_unchecked(const Vector& x, const Matrix& h);

/// A square matrix together with its Hermitian/skew split, definiteness
/// class and (iff h is positive definite) a Cholesky factor of h.
/// Immutable after construction; copies share the factor.
class HsSplitSystem {
 public:
  explicit HsSplitSystem(const Matrix& a, Real tol = kStructuralTol);

  /// Builds from already separated parts, a = h + s. Throws StructureError
  /// if h is not Hermitian or s is not skew-Hermitian within tol.
  static HsSplitSystem from_parts(Matrix h, Matrix s,
                                  Real tol = kStructuralTol);

  const Matrix& a() const { return a_; }
  const Matrix& h() const { return h_; }
  const Matrix& s() const { return s_; }
  Index size() const { return a_.rows(); }
  Real tol() const { return tol_; }

  Definiteness definiteness() const { return info_.cls; }
  const DefinitenessInfo& definiteness_info() const { return info_; }

  bool has_h_factor() const { return static_cast<bool>(factor_); }
  /// Throws ContractError when h is not positive definite.
  const HermitianFactor& h_factor() const;

 private:
  HsSplitSystem(Matrix a, Matrix h, Matrix s, Real tol);

  Matrix a_;
  Matrix h_;
  Matrix s_;
  Real tol_;
  DefinitenessInfo info_;
  std::shared_ptr<const HermitianFactor> factor_;
};

/// Dense LU solve with partial pivoting.
Vector direct_solve(const Matrix& a, const Vector& b);

/// Dense LU solve followed by iterative refinement with residuals
/// accumulated in extended precision. Used for reference solutions.
Vector refined_solve(const Matrix& a, const Vector& b, int sweeps = 3);

/// Spectral norm via the largest singular value.
Real norm2(const Matrix& m);

}  // namespace dhk
