#pragma once

#include <functional>
#include <string>
#include <vector>

#include "dhkrylov/config.hpp"
#include "dhkrylov/errors.hpp"

namespace dhk {

/// Unitary U with U* H U = diag(H11, 0) and U* S U block tridiagonal on
/// blocks 1..r-1 plus a decoupled trailing block r (possibly empty):
///   S_{i,i-1} = [Sigma_{i,i-1} 0] with Sigma_{i,i-1} nonsingular.
struct StaircaseForm {
  Matrix u;
  /// n_1 >= n_2 >= ... >= n_{r-1} > 0, n_r >= 0.
  std::vector<Index> block_sizes;
  Matrix h11;
  Matrix transformed_h;  // U* H U
  Matrix transformed_s;  // U* S U
  /// Values behind each rank decision: first the eigenvalues of H
  /// (descending), then the singular values of each coupling block.
  std::vector<RealVector> rank_singular_values;
  /// True when the final block n_r is nonzero.
  bool decoupled_block_present = false;
  Real tol = 1e-10;

  Index num_blocks() const { return static_cast<Index>(block_sizes.size()); }
  /// Row offset of block i (0-based).
  Index offset(Index i) const;
  /// Block (i, j) of U* S U (0-based).
  Matrix s_block(Index i, Index j) const;
  /// Block (i, j) of U* (H + S) U (0-based).
  Matrix a_block(Index i, Index j) const;
  /// Sigma_{i,i-1}: the leading n_i x n_i part of S_{i,i-1}, i >= 1.
  Matrix sigma(Index i) const;
};

/// Staircase reduction. h must be Hermitian positive semidefinite and s
/// skew-Hermitian. Eigenvalues of h and singular values of the coupling
/// blocks at or below tol * max(||h||_2, ||s||_2) count as zero. Throws
/// ContractError when h has an eigenvalue below -tol ||h||_2.
StaircaseForm hs_staircase(const Matrix& h, const Matrix& s, Real tol = 1e-10);

struct StaircaseResiduals {
  Real unitarity = 0;       // ||U* U - I||_max
  Real h_pattern = 0;       // entries of U* H U outside the (1,1) block
  Real s_pattern = 0;       // entries of U* S U outside the staircase pattern
  Real reconstruction = 0;  // ||U (U* A U) U* - A||_2 / ||A||_2
};

StaircaseResiduals staircase_residuals(const StaircaseForm& sf, const Matrix& h,
                                       const Matrix& s);

/// Block LDU factorization of T = U* A U in staircase form:
///   T = L_1 ... L_{r-2} D R_{r-2} ... R_1,
/// D = diag(A11, S_1, ..., S_{r-2}, S_rr), S_0 = A11 and
/// S_i = T_{i+1,i+1} - T_{i+1,i} S_{i-1}^{-1} T_{i,i+1}.
struct BlockDiagonalReduction {
  std::vector<Index> block_sizes;
  /// [A11, S_1, ..., S_{r-2}] followed by S_rr when present.
  std::vector<Matrix> blocks;
  bool has_final_skew_block = false;
  /// lower_factors[i] is block (i+1, i) of L_{i+1}: T_{i+1,i} S_{i-1}^{-1}.
  std::vector<Matrix> lower_factors;
  /// upper_factors[i] is block (i, i+1) of R_{i+1}: S_{i-1}^{-1} T_{i,i+1}.
  std::vector<Matrix> upper_factors;
  /// Smallest eigenvalue of the Hermitian part of each entry in blocks
  /// (the final skew block reports 0).
  std::vector<Real> min_hermitian_eigenvalues;

  Matrix diagonal() const;
  /// L_1 ... L_{r-2}
  Matrix lower() const;
  /// R_{r-2} ... R_1
  Matrix upper() const;
  /// Inverses, built by negating the off-diagonal block of each factor.
  Matrix lower_inverse() const;
  Matrix upper_inverse() const;
};

/// Throws DiagnosticsError (with the block index) if a Schur complement
/// has a Hermitian part that is not numerically positive definite.
BlockDiagonalReduction schur_block_diagonalize(const StaircaseForm& sf,
                                               Real tol = 1e-10);

using BlockSolve = std::function<Matrix(const Matrix&)>;

/// a22 - a21 a11^{-1} a12. Without a11_solve an LU of a11 is used; throws
/// ContractError when a11 is numerically singular.
Matrix schur_complement(const Matrix& a11, const Matrix& a12, const Matrix& a21,
                        const Matrix& a22, const BlockSolve& a11_solve = {});

/// Saddle system E x' = (J - R) x with E = diag(M, 0),
/// J = [[A_S, B], [-B*, 0]], R = diag(-A_H, 0) transformed by
/// Q = diag(V_B, U_B) from B* = U_B [Sigma 0] V_B*.
struct SaddleStaircase {
  Matrix q;
  Matrix e, j, r;  // Q* E Q, Q* J Q, Q* R Q
  RealVector sigma;
  Index n_velocity = 0;
  Index n_pressure = 0;
  /// Staircase form of the midpoint matrix at step size tau with blocks
  /// (n_v, n_p, 0) and U = Q.
  StaircaseForm form;
};

/// a_block = A_H + A_S with -A_H >= 0. Throws RankError (with the
/// numerical rank) when B lacks full column rank.
SaddleStaircase saddle_staircase(const Matrix& m, const Matrix& a_block,
                                 const Matrix& b, Real tau, Real tol = 1e-10);

/// JSON audit: block sizes, rank-decision values, residuals, presence of
/// the decoupled block.
std::string staircase_report_json(const StaircaseForm& sf, const Matrix& h,
                                  const Matrix& s);

}  // namespace dhk
