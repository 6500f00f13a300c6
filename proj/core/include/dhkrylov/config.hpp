#pragma once

#include <complex>
#include <cstddef>
#include <type_traits>

#include <Eigen/Dense>

namespace dhk {

#if defined(DHKRYLOV_USE_COMPLEX) && DHKRYLOV_USE_COMPLEX
using Scalar = std::complex<double>;
#else
using Scalar = double;
#endif

using Real = double;
using Complex = std::complex<double>;
using Index = Eigen::Index;

using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
using RealVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;
using ComplexMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;
using ComplexVector = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;

inline constexpr bool kComplexScalar = !std::is_same_v<Scalar, Real>;

/// Default structural tolerance, relative to the max-entry norm.
inline constexpr Real kStructuralTol = 1e-12;

/// Complex conjugate that stays in the scalar type (std::conj of a double
/// returns std::complex).
template <typename T>
T sconj(T x) {
  if constexpr (std::is_same_v<T, Real>) {
    return x;
  } else {
    return std::conj(x);
  }
}

/// i * Im(x); zero in real arithmetic.
template <typename T>
T imag_part_only(T x) {
  if constexpr (std::is_same_v<T, Real>) {
    (void)x;
    return T(0);
  } else {
    return T(0, std::imag(x));
  }
}

/// Largest absolute entry; zero for empty matrices.
template <typename Derived>
Real max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.size() == 0 ? Real(0) : m.cwiseAbs().maxCoeff();
}

}  // namespace dhk
