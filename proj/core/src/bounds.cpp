#include "dhkrylov/bounds.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace dhk {

namespace {

template <typename M>
ComplexVector general_eigenvalues(const M& m) {
  if (m.rows() == 0) return ComplexVector(0);
  if constexpr (std::is_same_v<typename M::Scalar, Real>) {
    Eigen::EigenSolver<M> es(m, false);
    return es.eigenvalues();
  } else {
    Eigen::ComplexEigenSolver<M> es(m, false);
    return es.eigenvalues();
  }
}

// Eigenvalues of a skew-Hermitian matrix s are i * theta with theta the
// eigenvalues of the Hermitian matrix -i s.
RealVector skew_imag_parts(const Matrix& s) {
  if (s.rows() == 0) return RealVector(0);
  const ComplexMatrix herm = Complex(0, -1) * s.template cast<Complex>();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(
      Real(0.5) * (herm + herm.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

}  // namespace

SpectralInterval spectral_interval(const HsSplitSystem& sys,
                                   bool check_real_parts) {
  const Matrix l = sys.h_factor().lower();
  SpectralInterval out;
  if (sys.size() == 0) {
    out.imag_parts = RealVector(0);
    out.max_abs_real = check_real_parts ? 0 : -1;
    return out;
  }
  // C = L^{-1} S L^{-*} = -L^{-1} (L^{-1} S)*, symmetrized to exact skewness.
  const Matrix x = l.triangularView<Eigen::Lower>().solve(sys.s());
  Matrix c = -l.triangularView<Eigen::Lower>().solve(Matrix(x.adjoint()));
  c = Real(0.5) * (c - c.adjoint());
  out.imag_parts = skew_imag_parts(c);
  out.lambda = out.imag_parts.cwiseAbs().maxCoeff();
  if (check_real_parts) {
    const ComplexVector mu = general_eigenvalues(c);
    out.max_abs_real = mu.size() ? mu.real().cwiseAbs().maxCoeff() : Real(0);
  }
  return out;
}

Real widlund_factor(Real lambda) {
  const Real d = std::hypot(Real(1), lambda) + 1;
  return (lambda * lambda) / (d * d);
}

Real rapoport_factor(Real lambda) {
  return lambda / (std::hypot(Real(1), lambda) + 1);
}

Real widlund_bound(Real lambda, Index k) {
  return 2 * std::pow(widlund_factor(lambda), static_cast<Real>(k));
}

Real rapoport_bound(Real lambda, Index k) {
  return 2 * std::pow(rapoport_factor(lambda), static_cast<Real>(k));
}

Real lgmres_bound(Real lambda, Index k, Real kappa_y) {
  return kappa_y * rapoport_bound(lambda, k);
}

Real kappa_y_estimate(const HsSplitSystem& sys) {
  const DefinitenessInfo& info = sys.definiteness_info();
  if (info.cls != Definiteness::PositiveDefinite) {
    throw ContractError("kappa_y_estimate: H is not positive definite");
  }
  return std::sqrt(info.max_eigenvalue / info.min_eigenvalue);
}

std::string_view to_string(BoundMethod m) {
  switch (m) {
    case BoundMethod::Widlund:
      return "widlund";
    case BoundMethod::Rapoport:
      return "rapoport";
    case BoundMethod::LGmres:
      return "lgmres";
  }
  return "?";
}

Real ConvergenceBound::operator()(Index k) const {
  switch (method) {
    case BoundMethod::Widlund:
      return widlund_bound(lambda, k);
    case BoundMethod::Rapoport:
      return rapoport_bound(lambda, k);
    case BoundMethod::LGmres:
      return lgmres_bound(lambda, k, kappa_y.value_or(Real(1)));
  }
  return 0;
}

BendixsonReport bendixson_rectangle(const HsSplitSystem& sys, Real slack_rel) {
  BendixsonReport rep;
  const Index n = sys.size();
  if (n == 0) return rep;
  Eigen::SelfAdjointEigenSolver<Matrix> hs(sys.h(), Eigen::EigenvaluesOnly);
  rep.re_min = hs.eigenvalues()(0);
  rep.re_max = hs.eigenvalues()(n - 1);
  const RealVector theta = skew_imag_parts(sys.s());
  rep.im_min = theta(0);
  rep.im_max = theta(n - 1);

  rep.eigenvalues = general_eigenvalues(sys.a());
  const Real slack = slack_rel * norm2(sys.a());
  rep.min_real_part = rep.eigenvalues.real().minCoeff();
  for (Index i = 0; i < n; ++i) {
    const Complex mu = rep.eigenvalues(i);
    const Real dx = std::max({rep.re_min - mu.real(), mu.real() - rep.re_max, Real(0)});
    const Real dy = std::max({rep.im_min - mu.imag(), mu.imag() - rep.im_max, Real(0)});
    rep.max_violation = std::max(rep.max_violation, std::hypot(dx, dy));
  }
  rep.contained = rep.max_violation <= slack;
  return rep;
}

}  // namespace dhk
