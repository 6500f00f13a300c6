#include <random>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "dhkrylov/dhdae.hpp"
#include "dhkrylov/hs_core.hpp"

namespace dhk {

namespace {

Index count_above(const RealVector& sv, Real threshold) {
  Index k = 0;
  for (Index i = 0; i < sv.size(); ++i) k += sv(i) > threshold ? 1 : 0;
  return k;
}

// Regularity probe: det(s E - A) != 0 for a regular pencil at all but
// finitely many s, so a nonsingular sample at any shift settles it.
bool shifts_regular(const Matrix& e, const Matrix& a, Real tol) {
  const Real ne = norm2(e);
  const Real na = norm2(a);
  const Real scale = ne > 0 ? na / ne : 1;
  std::mt19937_64 gen(0x5eed1234u);
  std::uniform_real_distribution<Real> dist(0.5, 1.5);
  for (int trial = 0; trial < 3; ++trial) {
    const Real s = scale * dist(gen);
    Matrix p = s * e - a;
    Eigen::BDCSVD<Matrix> svd(p);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0) return true;
    if (sv(sv.size() - 1) > tol * (s * ne + na)) return true;
  }
  return false;
}

}  // namespace

IndexReport index_classify(const DhDaeSystem& sys, Real tol) {
  sys.validate();
  const Index n = sys.order();
  const Matrix a = sys.j - sys.r;
  IndexReport rep;

  Eigen::SelfAdjointEigenSolver<Matrix> es(Real(0.5) * (sys.e + sys.e.adjoint()));
  const RealVector ev = es.eigenvalues();
  rep.rank_decisions.push_back(ev);
  const Real emax = n > 0 ? ev.cwiseAbs().maxCoeff() : Real(0);
  const Index rank_e = count_above(ev, tol * emax);
  const Index m = n - rank_e;

  rep.shift_check_regular = n == 0 || shifts_regular(sys.e, a, tol);

  if (m == 0) {
    rep.index = DaeIndex::Zero;
    rep.block_sizes = {0, n, 0, 0, 0};
    rep.nullspace_basis_of_e = Matrix::Zero(n, 0);
    rep.algebraic_block = Matrix::Zero(0, 0);
    rep.regular = rep.shift_check_regular;
    return rep;
  }

  // Eigenvalues ascend, so the first m eigenvectors span ker E.
  const Matrix z2 = es.eigenvectors().leftCols(m);
  const Matrix z1 = es.eigenvectors().rightCols(rank_e);
  rep.nullspace_basis_of_e = z2;
  rep.algebraic_block = z2.adjoint() * a * z2;

  Eigen::BDCSVD<Matrix> svd22(rep.algebraic_block,
                              Eigen::ComputeFullU | Eigen::ComputeFullV);
  const RealVector s22 = svd22.singularValues();
  rep.rank_decisions.push_back(s22);
  const Real s22max = s22.size() > 0 ? s22(0) : Real(0);
  const Real a_norm = norm2(a);
  const Index rank22 =
      s22max <= tol * a_norm ? 0 : count_above(s22, tol * s22max);

  if (rank22 == m) {
    rep.index = DaeIndex::One;
    rep.block_sizes = {0, rank_e, m, 0, 0};
    rep.regular = rep.shift_check_regular;
    return rep;
  }

  // Since R >= 0, left and right null vectors of J22 - R22 coincide.
  const Index k = m - rank22;
  const Matrix w2 = svd22.matrixV().rightCols(k);
  const Matrix coupling = w2.adjoint() * z2.adjoint() * a * z1;
  RealVector sc = RealVector::Zero(0);
  if (coupling.size() > 0) {
    Eigen::BDCSVD<Matrix> svdc(coupling);
    sc = svdc.singularValues();
  }
  rep.rank_decisions.push_back(sc);
  const Real scmax = sc.size() > 0 ? sc(0) : Real(0);
  const Index rank_c = scmax <= tol * a_norm ? 0 : count_above(sc, tol * scmax);

  rep.index = DaeIndex::Two;
  rep.block_sizes = {rank_c, rank_e - rank_c, rank22, rank_c, k - rank_c};
  rep.regular = rank_c == k && rep.shift_check_regular;
  return rep;
}

}  // namespace dhk
