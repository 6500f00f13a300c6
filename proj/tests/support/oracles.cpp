#include "oracles.hpp"

#include <cmath>

#include <Eigen/Cholesky>
#include <Eigen/QR>
#include <Eigen/SVD>

namespace dhk::testing {

namespace {

template <typename T = Scalar>
T draw(Rng& rng) {
  std::normal_distribution<Real> nd(0.0, 1.0);
  if constexpr (std::is_same_v<T, Real>) {
    return nd(rng);
  } else {
    const Real re = nd(rng);
    const Real im = nd(rng);
    return T(re, im);
  }
}

}  // namespace

Matrix random_matrix(Index rows, Index cols, Rng& rng) {
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) m(i, j) = draw(rng);
  }
  return m;
}

Vector random_vector(Index n, Rng& rng) {
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = draw(rng);
  return v;
}

Matrix random_unitary(Index n, Rng& rng) {
  Eigen::HouseholderQR<Matrix> qr(random_matrix(n, n, rng));
  return qr.householderQ() * Matrix::Identity(n, n);
}

Matrix random_hpd(Index n, Real cond, Rng& rng) {
  const Matrix q = random_unitary(n, rng);
  RealVector d(n);
  for (Index i = 0; i < n; ++i) {
    const Real t = n > 1 ? Real(i) / Real(n - 1) : Real(0);
    d(i) = std::pow(cond, t);
  }
  Matrix h = q * d.cast<Scalar>().asDiagonal() * q.adjoint();
  return Real(0.5) * (h + h.adjoint());
}

Matrix random_psd(Index n, Index rank, Rng& rng) {
  const Matrix g = random_matrix(n, rank, rng);
  Matrix h = g * g.adjoint();
  return Real(0.5) * (h + h.adjoint());
}

Matrix random_skew(Index n, Rng& rng, Real scale) {
  const Matrix g = random_matrix(n, n, rng);
  Matrix s = Real(0.5) * (g - g.adjoint());
  const Real m = max_abs(s);
  return m > 0 ? Matrix(s * (scale / m)) : s;
}

Real spectral_halfwidth_svd(const Matrix& h, const Matrix& s) {
  Eigen::LLT<Matrix> llt(h);
  const Matrix l = llt.matrixL();
  const Matrix x = l.triangularView<Eigen::Lower>().solve(s);
  const Matrix c = l.triangularView<Eigen::Lower>().solve(Matrix(x.adjoint()));
  Eigen::JacobiSVD<Matrix> svd(c);
  return svd.singularValues().size() ? svd.singularValues()(0) : Real(0);
}

HsSplitSystem random_system(Index n, Real cond, Real lambda, Rng& rng) {
  const Matrix h = random_hpd(n, cond, rng);
  Matrix s = random_skew(n, rng);
  const Real l0 = spectral_halfwidth_svd(h, s);
  s *= lambda / l0;
  return HsSplitSystem::from_parts(h, s);
}

Matrix orthonormalize(const Matrix& x) {
  Eigen::HouseholderQR<Matrix> qr(x);
  return qr.householderQ() * Matrix::Identity(x.rows(), x.cols());
}

Matrix krylov_basis(const Matrix& m, const Vector& v, Index k) {
  Matrix q(v.size(), k);
  q.col(0) = v / v.norm();
  for (Index j = 1; j < k; ++j) {
    Vector w = m * q.col(j - 1);
    for (int pass = 0; pass < 2; ++pass) {
      w -= q.leftCols(j) * (q.leftCols(j).adjoint() * w);
    }
    q.col(j) = w / w.norm();
  }
  return q;
}

Vector subspace_minimizer(const Matrix& a, const Vector& b, const Matrix& v,
                          const Matrix& g) {
  const Matrix lhs = g * a * v;
  const Vector rhs = g * b;
  const Vector y = lhs.completeOrthogonalDecomposition().solve(rhs);
  return v * y;
}

Real subspace_distance(const Matrix& x, const Matrix& y) {
  const Matrix qx = orthonormalize(x);
  const Matrix qy = orthonormalize(y);
  const Matrix proj = qy - qx * (qx.adjoint() * qy);
  Eigen::JacobiSVD<Matrix> svd(proj);
  return svd.singularValues().size() ? svd.singularValues()(0) : Real(0);
}

}  // namespace dhk::testing
