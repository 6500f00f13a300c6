#pragma once

// Random instance generators and brute-force reference computations shared
// by the unit and acceptance tests. Everything here uses plain dense Eigen
// factorizations and none of the library's solver code.

#include <cstdint>
#include <random>

#include "dhkrylov/config.hpp"
#include "dhkrylov/hs_core.hpp"

namespace dhk::testing {

using Rng = std::mt19937_64;

Matrix random_matrix(Index rows, Index cols, Rng& rng);
Vector random_vector(Index n, Rng& rng);
Matrix random_unitary(Index n, Rng& rng);

/// Q diag(d) Q* with d log-spaced in [1, cond].
Matrix random_hpd(Index n, Real cond, Rng& rng);
/// G G* with G random n x rank.
Matrix random_psd(Index n, Index rank, Rng& rng);
/// (G - G*) / 2 scaled so that the largest entry is `scale`.
Matrix random_skew(Index n, Rng& rng, Real scale = 1);

/// ||L^{-1} S L^{-*}||_2 with H = L L*, from an SVD.
Real spectral_halfwidth_svd(const Matrix& h, const Matrix& s);

/// H random HPD with condition number cond, S random skew rescaled so the
/// spectral half-width of H^{-1} S equals lambda.
HsSplitSystem random_system(Index n, Real cond, Real lambda, Rng& rng);

/// Orthonormal basis of span{v, M v, ..., M^{k-1} v}, built by Arnoldi with
/// two passes of classical Gram-Schmidt.
Matrix krylov_basis(const Matrix& m, const Vector& v, Index k);

/// argmin_{z in range(V)} ||G (b - A z)||_2, returned as z.
Vector subspace_minimizer(const Matrix& a, const Vector& b, const Matrix& v,
                          const Matrix& g);

/// Largest principal angle sine between range(X) and range(Y).
Real subspace_distance(const Matrix& x, const Matrix& y);

/// Orthonormalize the columns of x.
Matrix orthonormalize(const Matrix& x);

}  // namespace dhk::testing
