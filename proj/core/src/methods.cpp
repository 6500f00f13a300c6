#include <string>

#include "dhkrylov/krylov.hpp"

namespace dhk {

std::string_view to_string(Method m) {
  switch (m) {
    case Method::Widlund:
      return "widlund";
    case Method::Rapoport:
      return "rapoport";
    case Method::LGmres:
      return "lgmres";
    case Method::Gmres:
      return "gmres";
    case Method::Hss:
      return "hss";
  }
  return "?";
}

Method parse_method(std::string_view name) {
  for (Method m : all_methods()) {
    if (to_string(m) == name) return m;
  }
  throw ContractError("unknown solver '" + std::string(name) +
                      "' (expected widlund, rapoport, lgmres, gmres or hss)");
}

const std::vector<Method>& all_methods() {
  static const std::vector<Method> methods = {
      Method::Widlund, Method::Rapoport, Method::LGmres, Method::Gmres,
      Method::Hss};
  return methods;
}

SolveReport solve(Method m, const HsSplitSystem& sys, const Vector& b,
                  const SolverOptions& opts, Real hss_alpha) {
  switch (m) {
    case Method::Widlund:
      return solve_widlund(sys, b, opts);
    case Method::Rapoport:
      return solve_rapoport(sys, b, opts);
    case Method::LGmres:
      return solve_lgmres(sys, b, opts);
    case Method::Gmres:
      return solve_gmres(sys, b, opts);
    case Method::Hss:
      return solve_hss(sys, b, hss_alpha, opts);
  }
  throw ContractError("solve: invalid method");
}

}  // namespace dhk
