#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "dhkrylov/config.hpp"
#include "dhkrylov/krylov.hpp"

namespace dhk {

/// Shortest decimal form that reads back to the same double.
std::string format_real(Real v);

/// Residual history with header
///   k,res_2norm,res_hinv_norm,err_hnorm,bound_widlund,bound_rapoport
/// Residual columns are absolute. Bound columns are the relative bounds:
/// bound_rapoport(k) for ||b - A x_k||_{H^-1} / ||b||_{H^-1} and, on even k
/// only, bound_widlund for ||x - x_k||_H / ||x||_H. Missing values are empty.
void write_residual_csv(std::ostream& os, const SolveReport& rep,
                        std::optional<Real> lambda = std::nullopt);

}  // namespace dhk
