#include "dhkrylov_bench/models.hpp"

#include <fstream>

#include "dhkrylov/errors.hpp"
#include "dhkrylov/matrix_market.hpp"

namespace dhk::bench {

namespace {

using nlohmann::json;

// Second-difference matrix tridiag(-1, 2, -1) of order n; with free ends the
// first and last diagonal entries are 1 (a Neumann chain, singular).
Matrix second_difference(Index n, bool free_ends) {
  Matrix m = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    m(i, i) = 2;
    if (i + 1 < n) {
      m(i, i + 1) = -1;
      m(i + 1, i) = -1;
    }
  }
  if (free_ends && n > 0) {
    m(0, 0) = 1;
    m(n - 1, n - 1) = 1;
  }
  return m;
}

DhDaeSystem mechanical(const json& p) {
  // Spring-mass chain fixed at both ends with Rayleigh damping
  // D = a M + b K.
  const Index n = p.at("n").get<Index>();
  if (n < 1) throw ContractError("mechanical: n must be positive");
  const Matrix m = p.at("mass").get<Real>() * Matrix::Identity(n, n);
  const Matrix k = p.at("stiffness").get<Real>() * second_difference(n, false);
  const Matrix d = p.at("damping_mass").get<Real>() * m +
                   p.at("damping_stiffness").get<Real>() * k;
  const Real amp = p.at("force_amplitude").get<Real>();
  const Real omega = p.at("force_frequency").get<Real>();
  SourceFunction force;
  if (amp != 0) {
    force = [n, amp, omega](Real t) {
      Vector f = Vector::Zero(n);
      f(n - 1) = amp * std::sin(omega * t);
      return f;
    };
  }
  return assemble_mechanical(m, d, k, force);
}

DhDaeSystem rlc(const json& p) {
  RlcParameters r;
  r.inductance = p.at("L").get<Real>();
  r.capacitance1 = p.at("C1").get<Real>();
  r.capacitance2 = p.at("C2").get<Real>();
  r.resistance_g = p.at("RG").get<Real>();
  r.resistance_l = p.at("RL").get<Real>();
  r.resistance_r = p.at("RR").get<Real>();
  const Real eg = p.at("eg").get<Real>();
  std::function<Real(Real)> source;
  if (eg != 0) source = [eg](Real) { return eg; };
  return assemble_rlc(r, source);
}

DhDaeSystem stokes_like(const json& p) {
  StokesLikeParameters s;
  s.grid_n = p.at("grid_n").get<Index>();
  s.viscosity = p.at("viscosity").get<Real>();
  s.convection = p.at("convection").get<Real>();
  s.stabilization = p.at("stabilization").get<Real>();
  const auto kind = p.at("stabilization_kind").get<std::string>();
  if (kind == "pressure_laplacian") {
    s.stabilization_kind = StabilizationKind::PressureLaplacian;
  } else if (kind == "identity") {
    s.stabilization_kind = StabilizationKind::Identity;
  } else {
    throw ContractError("stokes_like: unknown stabilization_kind '" + kind + "'");
  }
  return assemble_stokes_like(s);
}

DhDaeSystem poroelastic(const json& p) {
  // One-dimensional Biot column: displacement at n interior nodes, pressure
  // in n + 1 cells, D the nodal-to-cell difference.
  const Index n = p.at("n").get<Index>();
  if (n < 1) throw ContractError("poroelastic: n must be positive");
  const Index np = n + 1;
  const Matrix a = p.at("elasticity").get<Real>() * second_difference(n, false);
  const Matrix m = p.at("storage").get<Real>() * Matrix::Identity(np, np);
  const Matrix k = p.at("permeability").get<Real>() * second_difference(np, true);
  const Matrix y = p.at("density").get<Real>() * Matrix::Identity(n, n);
  Matrix d = Matrix::Zero(np, n);
  for (Index i = 0; i < n; ++i) {
    d(i, i) = -1;
    d(i + 1, i) = 1;
  }
  d *= p.at("coupling").get<Real>();
  return assemble_poroelastic(a, m, y, k, d, p.at("quasi_stationary").get<bool>());
}

DhDaeSystem from_files(const json& p) {
  auto read = [&](const char* key) {
    return read_matrix_market(std::filesystem::path(p.at(key).get<std::string>()));
  };
  return make_dhdae(read("e"), read("j"), read("r"));
}

}  // namespace

const std::vector<ModelInfo>& model_catalog() {
  static const std::vector<ModelInfo> catalog = {
      {"mechanical",
       "spring-mass chain M x'' + D x' + K x = f, Rayleigh damping; index 0",
       {{"n", 50},
        {"mass", 1.0},
        {"stiffness", 1e4},
        {"damping_mass", 0.1},
        {"damping_stiffness", 1e-3},
        {"force_amplitude", 0.0},
        {"force_frequency", 1.0}}},
      {"rlc", "five-state RLC circuit with voltage source E_G; index 1",
       {{"L", 1.0},
        {"C1", 1.0},
        {"C2", 1.0},
        {"RG", 1.0},
        {"RL", 1.0},
        {"RR", 1.0},
        {"eg", 0.0}}},
      {"stokes_like",
       "staggered-grid Stokes/Oseen on the unit square; index 1 with "
       "stabilization > 0, index 2 without",
       {{"grid_n", 16},
        {"viscosity", 1.0},
        {"convection", 0.0},
        {"stabilization", 0.0},
        {"stabilization_kind", "pressure_laplacian"}}},
      {"poroelastic",
       "1-D Biot consolidation column; index 0, or index 2 when quasi_stationary",
       {{"n", 20},
        {"elasticity", 1.0},
        {"storage", 1.0},
        {"permeability", 1.0},
        {"density", 1e-4},
        {"coupling", 1.0},
        {"quasi_stationary", false}}},
      {"matrix_market", "E, J, R read from Matrix Market files",
       {{"e", ""}, {"j", ""}, {"r", ""}}},
  };
  return catalog;
}

json resolve_descriptor(const json& descriptor) {
  if (!descriptor.is_object() || !descriptor.contains("name")) {
    throw ContractError("model descriptor needs a \"name\" field");
  }
  const auto name = descriptor.at("name").get<std::string>();
  for (const auto& info : model_catalog()) {
    if (info.name != name) continue;
    json params = info.defaults;
    if (descriptor.contains("params")) {
      for (const auto& [key, value] : descriptor.at("params").items()) {
        if (!params.contains(key)) {
          throw ContractError("model '" + name + "' has no parameter '" + key + "'");
        }
        params[key] = value;
      }
    }
    return {{"name", name}, {"params", params}};
  }
  throw ContractError("unknown model '" + name + "'");
}

DhDaeSystem build_model(const json& descriptor) {
  const json resolved = resolve_descriptor(descriptor);
  const auto name = resolved.at("name").get<std::string>();
  const json& p = resolved.at("params");
  try {
    if (name == "mechanical") return mechanical(p);
    if (name == "rlc") return rlc(p);
    if (name == "stokes_like") return stokes_like(p);
    if (name == "poroelastic") return poroelastic(p);
    return from_files(p);
  } catch (const json::exception& e) {
    throw ContractError("model '" + name + "': " + e.what());
  }
}

std::vector<std::filesystem::path> export_model(const DhDaeSystem& sys,
                                                const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> out;
  for (const auto& [file, m] :
       {std::pair{"e.mtx", &sys.e}, {"j.mtx", &sys.j}, {"r.mtx", &sys.r}}) {
    const auto path = dir / file;
    write_matrix_market(path, *m, MatrixMarketFormat::Coordinate);
    out.push_back(path);
  }
  return out;
}

json load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

}  // namespace dhk::bench
