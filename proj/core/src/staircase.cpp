#include "dhkrylov/staircase.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>
#include <nlohmann/json.hpp>

#include "dhkrylov/hs_core.hpp"

namespace dhk {

namespace {

Real min_hermitian_eigenvalue(const Matrix& m) {
  if (m.rows() == 0) return 0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(Real(0.5) * (m + m.adjoint()),
                                           Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

}  // namespace

Index StaircaseForm::offset(Index i) const {
  return std::accumulate(block_sizes.begin(), block_sizes.begin() + i, Index(0));
}

Matrix StaircaseForm::s_block(Index i, Index j) const {
  return transformed_s.block(offset(i), offset(j), block_sizes[i],
                             block_sizes[j]);
}

Matrix StaircaseForm::a_block(Index i, Index j) const {
  return s_block(i, j) + transformed_h.block(offset(i), offset(j),
                                             block_sizes[i], block_sizes[j]);
}

Matrix StaircaseForm::sigma(Index i) const {
  if (i < 1 || i >= num_blocks()) {
    throw DimensionError("StaircaseForm::sigma: block index out of range");
  }
  return s_block(i, i - 1).leftCols(block_sizes[i]);
}

StaircaseForm hs_staircase(const Matrix& h, const Matrix& s, Real tol) {
  const Index n = h.rows();
  if (h.cols() != n || s.rows() != n || s.cols() != n) {
    throw DimensionError("hs_staircase: h and s must be square of equal order");
  }
  if (!is_hermitian(h)) throw StructureError("hs_staircase: h is not Hermitian");
  if (!is_skew_hermitian(s)) {
    throw StructureError("hs_staircase: s is not skew-Hermitian");
  }

  StaircaseForm sf;
  sf.tol = tol;
  Eigen::SelfAdjointEigenSolver<Matrix> es(Real(0.5) * (h + h.adjoint()));
  const RealVector ev = es.eigenvalues();  // ascending
  const Real h_norm = n > 0 ? ev.cwiseAbs().maxCoeff() : Real(0);
  const Real scale = std::max(h_norm, norm2(s));
  const Real threshold = tol * scale;
  sf.rank_singular_values.push_back(ev.reverse());
  if (n > 0 && ev(0) < -tol * h_norm) {
    std::ostringstream os;
    os << "hs_staircase: h has eigenvalue " << ev(0)
       << " below -tol * ||h||_2";
    throw ContractError(os.str());
  }
  Index n1 = 0;
  for (Index i = 0; i < n; ++i) n1 += ev(i) > threshold ? 1 : 0;

  if (n1 == n || n1 == 0) {
    // Nonsingular h: nothing to split. Zero h: one decoupled block.
    sf.u = Matrix::Identity(n, n);
    sf.block_sizes = n1 == n ? std::vector<Index>{n, 0} : std::vector<Index>{n};
    sf.decoupled_block_present = n1 == 0 && n > 0;
    sf.transformed_h = h;
    sf.transformed_s = s;
    sf.h11 = n1 == n ? h : Matrix(0, 0);
    return sf;
  }

  // Range of h first (eigenvalues descending), then its nullspace.
  Matrix u(n, n);
  u << es.eigenvectors().rightCols(n1).rowwise().reverse(),
      es.eigenvectors().leftCols(n - n1);
  Matrix ts = u.adjoint() * s * u;

  std::vector<Index> sizes{n1};
  Index prev = 0;
  Index cur = n1;
  bool decoupled = false;
  while (cur < n) {
    const Index np = sizes.back();
    const Index m = n - cur;
    const Matrix c = ts.block(cur, prev, m, np);
    Eigen::JacobiSVD<Matrix> svd(c, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const RealVector sv = svd.singularValues();
    sf.rank_singular_values.push_back(sv);
    Index rank = 0;
    for (Index i = 0; i < sv.size(); ++i) rank += sv(i) > threshold ? 1 : 0;
    if (rank == 0) {
      decoupled = true;
      break;
    }
    // Rotating the previous block by V keeps its own coupling to the block
    // before it in the form [Sigma 0], since only its columns change.
    u.middleCols(prev, np) = u.middleCols(prev, np) * svd.matrixV();
    u.rightCols(m) = u.rightCols(m) * svd.matrixU();
    ts = u.adjoint() * s * u;
    sizes.push_back(rank);
    prev = cur;
    cur += rank;
  }
  sizes.push_back(decoupled ? n - cur : 0);

  sf.u = std::move(u);
  sf.block_sizes = std::move(sizes);
  sf.decoupled_block_present = decoupled;
  sf.transformed_s = std::move(ts);
  sf.transformed_h = sf.u.adjoint() * h * sf.u;
  sf.h11 = sf.transformed_h.topLeftCorner(n1, n1);
  return sf;
}

StaircaseResiduals staircase_residuals(const StaircaseForm& sf, const Matrix& h,
                                       const Matrix& s) {
  StaircaseResiduals r;
  const Index n = sf.u.rows();
  r.unitarity = max_abs(sf.u.adjoint() * sf.u - Matrix::Identity(n, n));
  const Index n1 = sf.h11.rows();
  Matrix hp = sf.transformed_h;
  hp.topLeftCorner(n1, n1).setZero();
  r.h_pattern = max_abs(hp);

  Matrix sp = sf.transformed_s;
  const Index nb = sf.num_blocks();
  const Index last = nb - 1;
  for (Index i = 0; i < nb; ++i) {
    for (Index j = 0; j < nb; ++j) {
      const Index oi = sf.offset(i), oj = sf.offset(j);
      const Index ni = sf.block_sizes[i], nj = sf.block_sizes[j];
      if (i == j) {
        sp.block(oi, oj, ni, nj).setZero();
      } else if (i < last && j < last && i == j + 1) {
        // [Sigma 0]: only the leading ni columns may be nonzero.
        sp.block(oi, oj, ni, std::min(ni, nj)).setZero();
      } else if (i < last && j < last && j == i + 1) {
        sp.block(oi, oj, std::min(ni, nj), nj).setZero();
      }
    }
  }
  r.s_pattern = max_abs(sp);

  const Matrix a = h + s;
  const Matrix t = sf.transformed_h + sf.transformed_s;
  const Real an = norm2(a);
  const Real rec = norm2(Matrix(sf.u * t * sf.u.adjoint() - a));
  r.reconstruction = an > 0 ? rec / an : rec;
  return r;
}

Matrix BlockDiagonalReduction::diagonal() const {
  const Index n =
      std::accumulate(block_sizes.begin(), block_sizes.end(), Index(0));
  Matrix d = Matrix::Zero(n, n);
  Index off = 0;
  for (const Matrix& b : blocks) {
    d.block(off, off, b.rows(), b.cols()) = b;
    off += b.rows();
  }
  return d;
}

namespace {

Matrix elementary(const std::vector<Index>& sizes, Index row_block,
                  Index col_block, const Matrix& blk, Real sign) {
  const Index n = std::accumulate(sizes.begin(), sizes.end(), Index(0));
  Matrix m = Matrix::Identity(n, n);
  const Index ro =
      std::accumulate(sizes.begin(), sizes.begin() + row_block, Index(0));
  const Index co =
      std::accumulate(sizes.begin(), sizes.begin() + col_block, Index(0));
  m.block(ro, co, blk.rows(), blk.cols()) = sign * blk;
  return m;
}

Index total(const std::vector<Index>& sizes) {
  return std::accumulate(sizes.begin(), sizes.end(), Index(0));
}

}  // namespace

Matrix BlockDiagonalReduction::lower() const {
  Matrix out = Matrix::Identity(total(block_sizes), total(block_sizes));
  for (std::size_t i = 0; i < lower_factors.size(); ++i) {
    const Index bi = static_cast<Index>(i);
    out = out * elementary(block_sizes, bi + 1, bi, lower_factors[i], 1);
  }
  return out;
}

Matrix BlockDiagonalReduction::upper() const {
  Matrix out = Matrix::Identity(total(block_sizes), total(block_sizes));
  for (std::size_t i = upper_factors.size(); i-- > 0;) {
    const Index bi = static_cast<Index>(i);
    out = out * elementary(block_sizes, bi, bi + 1, upper_factors[i], 1);
  }
  return out;
}

Matrix BlockDiagonalReduction::lower_inverse() const {
  Matrix out = Matrix::Identity(total(block_sizes), total(block_sizes));
  for (std::size_t i = lower_factors.size(); i-- > 0;) {
    const Index bi = static_cast<Index>(i);
    out = out * elementary(block_sizes, bi + 1, bi, lower_factors[i], -1);
  }
  return out;
}

Matrix BlockDiagonalReduction::upper_inverse() const {
  Matrix out = Matrix::Identity(total(block_sizes), total(block_sizes));
  for (std::size_t i = 0; i < upper_factors.size(); ++i) {
    const Index bi = static_cast<Index>(i);
    out = out * elementary(block_sizes, bi, bi + 1, upper_factors[i], -1);
  }
  return out;
}

BlockDiagonalReduction schur_block_diagonalize(const StaircaseForm& sf,
                                               Real tol) {
  BlockDiagonalReduction red;
  const Index nb = sf.num_blocks();
  // Blocks 0..tri-1 form the coupled tridiagonal part; the last block is
  // the decoupled one (possibly empty).
  const Index tri = nb - 1;
  for (Index i = 0; i < tri; ++i) red.block_sizes.push_back(sf.block_sizes[i]);

  auto check = [&](const Matrix& m, Index idx) {
    const Real lmin = min_hermitian_eigenvalue(m);
    red.min_hermitian_eigenvalues.push_back(lmin);
    if (!(lmin > tol * norm2(m))) {
      std::ostringstream os;
      os << "schur_block_diagonalize: block " << idx
         << " has Hermitian part with smallest eigenvalue " << lmin;
      throw DiagnosticsError(os.str(), static_cast<long>(idx));
    }
  };

  if (tri > 0) {
    Matrix schur = sf.a_block(0, 0);
    check(schur, 0);
    red.blocks.push_back(schur);
    for (Index i = 1; i < tri; ++i) {
      Eigen::PartialPivLU<Matrix> lu(schur);
      const Matrix t_lo = sf.a_block(i, i - 1);
      const Matrix t_up = sf.a_block(i - 1, i);
      const Matrix right = lu.solve(t_up);
      // T_{i,i-1} S^{-1}: solve S* Y = T_{i,i-1}* and take Y*.
      Eigen::PartialPivLU<Matrix> lu_adj(Matrix(schur.adjoint()));
      const Matrix lower = lu_adj.solve(Matrix(t_lo.adjoint())).adjoint();
      red.lower_factors.push_back(lower);
      red.upper_factors.push_back(right);
      schur = sf.a_block(i, i) - t_lo * right;
      check(schur, i);
      red.blocks.push_back(schur);
    }
  }
  const Index last = sf.block_sizes.back();
  if (last > 0) {
    red.has_final_skew_block = true;
    red.block_sizes.push_back(last);
    red.blocks.push_back(sf.a_block(nb - 1, nb - 1));
    red.min_hermitian_eigenvalues.push_back(0);
  }
  return red;
}

Matrix schur_complement(const Matrix& a11, const Matrix& a12, const Matrix& a21,
                        const Matrix& a22, const BlockSolve& a11_solve) {
  if (a11.rows() != a11.cols() || a12.rows() != a11.rows() ||
      a21.cols() != a11.cols() || a22.rows() != a21.rows() ||
      a22.cols() != a12.cols()) {
    throw DimensionError("schur_complement: blocks do not conform");
  }
  if (a11_solve) return a22 - a21 * a11_solve(a12);
  Eigen::FullPivLU<Matrix> lu(a11);
  if (!lu.isInvertible()) {
    throw ContractError("schur_complement: a11 is numerically singular");
  }
  return a22 - a21 * lu.solve(a12);
}

SaddleStaircase saddle_staircase(const Matrix& m, const Matrix& a_block,
                                 const Matrix& b, Real tau, Real tol) {
  const Index nv = m.rows();
  const Index np = b.cols();
  if (m.cols() != nv || a_block.rows() != nv || a_block.cols() != nv ||
      b.rows() != nv) {
    throw DimensionError("saddle_staircase: blocks do not conform");
  }
  if (!(tau > 0)) throw ContractError("saddle_staircase: tau must be positive");
  if (np > nv) {
    throw RankError("saddle_staircase: B has more columns than rows",
                    static_cast<long>(nv));
  }
  Eigen::JacobiSVD<Matrix> svd(Matrix(b.adjoint()),
                               Eigen::ComputeFullU | Eigen::ComputeFullV);
  const RealVector sv = svd.singularValues();
  Index rank = 0;
  for (Index i = 0; i < sv.size(); ++i) rank += sv(i) > tol * sv(0) ? 1 : 0;
  if (rank < np) {
    std::ostringstream os;
    os << "saddle_staircase: B* has numerical rank " << rank << " < " << np;
    throw RankError(os.str(), static_cast<long>(rank));
  }

  SaddleStaircase out;
  out.n_velocity = nv;
  out.n_pressure = np;
  out.sigma = sv;
  const Index n = nv + np;
  out.q = Matrix::Zero(n, n);
  out.q.topLeftCorner(nv, nv) = svd.matrixV();
  out.q.bottomRightCorner(np, np) = svd.matrixU();

  const Matrix a_h = Real(0.5) * (a_block + a_block.adjoint());
  const Matrix a_s = Real(0.5) * (a_block - a_block.adjoint());
  Matrix e = Matrix::Zero(n, n), j = Matrix::Zero(n, n), r = Matrix::Zero(n, n);
  e.topLeftCorner(nv, nv) = m;
  j.topLeftCorner(nv, nv) = a_s;
  j.topRightCorner(nv, np) = b;
  j.bottomLeftCorner(np, nv) = -b.adjoint();
  r.topLeftCorner(nv, nv) = -a_h;
  out.e = out.q.adjoint() * e * out.q;
  out.j = out.q.adjoint() * j * out.q;
  out.r = out.q.adjoint() * r * out.q;

  StaircaseForm& sf = out.form;
  sf.tol = tol;
  sf.u = out.q;
  sf.block_sizes = {nv, np, 0};
  sf.transformed_h = out.e + (tau / 2) * out.r;
  sf.transformed_s = (-tau / 2) * out.j;
  sf.h11 = sf.transformed_h.topLeftCorner(nv, nv);
  Eigen::SelfAdjointEigenSolver<Matrix> es(sf.h11, Eigen::EigenvaluesOnly);
  sf.rank_singular_values.push_back(es.eigenvalues().reverse());
  sf.rank_singular_values.push_back((tau / 2) * sv);
  return out;
}

std::string staircase_report_json(const StaircaseForm& sf, const Matrix& h,
                                  const Matrix& s) {
  using nlohmann::json;
  json j;
  j["n"] = sf.u.rows();
  j["r"] = sf.num_blocks();
  j["block_sizes"] = sf.block_sizes;
  j["decoupled_block_present"] = sf.decoupled_block_present;
  j["tol"] = sf.tol;
  json decisions = json::array();
  for (std::size_t i = 0; i < sf.rank_singular_values.size(); ++i) {
    const RealVector& v = sf.rank_singular_values[i];
    json d;
    d["stage"] = i == 0 ? std::string("eigenvalues of H")
                        : "coupling block " + std::to_string(i + 1) + "," +
                              std::to_string(i);
    d["values"] = std::vector<Real>(v.data(), v.data() + v.size());
    decisions.push_back(std::move(d));
  }
  j["rank_decisions"] = std::move(decisions);
  const StaircaseResiduals res = staircase_residuals(sf, h, s);
  j["residuals"] = {{"unitarity", res.unitarity},
                    {"h_pattern", res.h_pattern},
                    {"s_pattern", res.s_pattern},
                    {"reconstruction", res.reconstruction}};
  return j.dump(2);
}

}  // namespace dhk
