#pragma once

#include <optional>
#include <string_view>

#include "dhkrylov/config.hpp"
#include "dhkrylov/hs_core.hpp"

namespace dhk {

/// Spectrum of K = H^{-1} S, which lies on the imaginary axis.
struct SpectralInterval {
  /// Half-width: spec(K) lies in i[-lambda, lambda].
  Real lambda = 0;
  /// Imaginary parts of the eigenvalues of K, ascending.
  RealVector imag_parts;
  /// max |Re mu| from an unstructured eigensolve of L^{-1} S L^{-*};
  /// negative when the check was skipped.
  Real max_abs_real = -1;
};

/// Eigenvalues of the skew-Hermitian matrix L^{-1} S L^{-*} (H = L L*)
/// through the Hermitian matrix i L^{-1} S L^{-*}. Throws ContractError
/// when H is not positive definite.
SpectralInterval spectral_interval(const HsSplitSystem& sys,
                                   bool check_real_parts = true);

/// (sqrt(1+l^2) - 1) / (sqrt(1+l^2) + 1), evaluated without cancellation.
Real widlund_factor(Real lambda);
/// l / (sqrt(1+l^2) + 1)
Real rapoport_factor(Real lambda);

/// 2 q^k with q = widlund_factor. Bounds ||x - x_{2k}||_H / ||x||_H.
Real widlund_bound(Real lambda, Index k);
/// 2 q^k with q = rapoport_factor. Bounds ||b - A x_k||_{H^-1} / ||b||_{H^-1}.
Real rapoport_bound(Real lambda, Index k);
/// kappa_y * rapoport_bound; bounds ||r_k||_2 / ||bhat||_2 of L-GMRES.
Real lgmres_bound(Real lambda, Index k, Real kappa_y);

/// sqrt(kappa_2(H)). The eigenvector matrix Y of I + K can be chosen with
/// H^{1/2} Y unitary, giving kappa(Y) = kappa(H^{-1/2}) = sqrt(kappa(H)).
Real kappa_y_estimate(const HsSplitSystem& sys);

enum class BoundMethod { Widlund, Rapoport, LGmres };

std::string_view to_string(BoundMethod m);

struct ConvergenceBound {
  Real lambda = 0;
  BoundMethod method = BoundMethod::Rapoport;
  std::optional<Real> kappa_y;

  /// For Widlund, k counts pairs of steps (the bound for iterate 2k).
  Real operator()(Index k) const;
};

struct BendixsonReport {
  Real re_min = 0, re_max = 0;
  Real im_min = 0, im_max = 0;
  ComplexVector eigenvalues;
  bool contained = true;
  /// Largest distance of an eigenvalue outside the rectangle (0 if none).
  Real max_violation = 0;
  /// Smallest real part among the eigenvalues of A.
  Real min_real_part = 0;
};

/// Rectangle [lambda_min(H), lambda_max(H)] x [min Im spec(S),
/// max Im spec(S)] and whether every eigenvalue of A lies inside it with
/// slack slack_rel * ||A||_2.
BendixsonReport bendixson_rectangle(const HsSplitSystem& sys,
                                    Real slack_rel = 1e-10);

}  // namespace dhk
