#include "dhkrylov/csv.hpp"

#include <charconv>
#include <ostream>

#include "dhkrylov/bounds.hpp"

namespace dhk {

std::string format_real(Real v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

void cell(std::ostream& os, const std::vector<Real>& col, std::size_t k) {
  os << ',';
  if (k < col.size()) os << format_real(col[k]);
}

}  // namespace

void write_residual_csv(std::ostream& os, const SolveReport& rep,
                        std::optional<Real> lambda) {
  os << "k,res_2norm,res_hinv_norm,err_hnorm,bound_widlund,bound_rapoport\n";
  for (std::size_t k = 0; k < rep.residual_2norm.size(); ++k) {
    os << k;
    cell(os, rep.residual_2norm, k);
    cell(os, rep.residual_hinv_norm, k);
    cell(os, rep.error_h_norm, k);
    os << ',';
    if (lambda && k % 2 == 0) {
      os << format_real(widlund_bound(*lambda, static_cast<Index>(k / 2)));
    }
    os << ',';
    if (lambda) os << format_real(rapoport_bound(*lambda, static_cast<Index>(k)));
    os << '\n';
  }
}

}  // namespace dhk
