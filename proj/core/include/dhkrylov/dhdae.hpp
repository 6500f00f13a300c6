#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "dhkrylov/config.hpp"
#include "dhkrylov/errors.hpp"

namespace dhk {

/// Time-dependent source term t -> f(t). Must be a pure function of t.
using SourceFunction = std::function<Vector(Real)>;

/// Named contiguous group of state variables (e.g. velocity, pressure).
struct VariableBlock {
  std::string name;
  Index size = 0;
};

/// Linear constant-coefficient dissipative Hamiltonian DAE
///   E x' = (J - R) x + f(t),  E = E* >= 0,  J = -J*,  R = R* >= 0.
struct DhDaeSystem {
  Matrix e;
  Matrix j;
  Matrix r;
  SourceFunction f;
  std::vector<VariableBlock> blocks;

  Index order() const { return e.rows(); }
  /// f(t); the zero vector when no source is attached.
  Vector source(Real t) const;
  /// Throws StructureError / ModelError if the defining properties fail.
  void validate(Real tol = kStructuralTol) const;
};

/// Assembles and validates a system. An empty f means f == 0.
DhDaeSystem make_dhdae(Matrix e, Matrix j, Matrix r, SourceFunction f = {},
                       std::vector<VariableBlock> blocks = {},
                       Real tol = kStructuralTol);

SourceFunction zero_source(Index n);

/// M x'' + D x' + K x = force(t) in first-order form with state
/// (x', x): E = diag(M, K), J = [[0, -K], [K, 0]], R = diag(D, 0).
/// Throws ModelError unless M, K are HPD and D is Hermitian PSD.
DhDaeSystem assemble_mechanical(const Matrix& m, const Matrix& d,
                                const Matrix& k,
                                SourceFunction force = {});

struct RlcParameters {
  Real inductance = 1;    // L
  Real capacitance1 = 1;  // C1
  Real capacitance2 = 1;  // C2
  Real resistance_g = 1;  // R_G
  Real resistance_l = 1;  // R_L
  Real resistance_r = 1;  // R_R
};

/// Five-state RLC circuit with unknowns (I, V1, V2, I_G, I_R). The voltage
/// source e_g(t) enters the fourth (algebraic) equation with a plus sign.
DhDaeSystem assemble_rlc(const RlcParameters& p,
                         std::function<Real(Real)> e_g = {});

enum class StabilizationKind {
  /// -C = stabilization * L_p, L_p the cell-centred Neumann pressure
  /// Laplacian with the last pressure unknown pinned.
  PressureLaplacian,
  /// -C = stabilization * I
  Identity,
};

struct StokesLikeParameters {
  Index grid_n = 8;
  Real viscosity = 1;
  Real convection = 0;
  Real stabilization = 0;
  StabilizationKind stabilization_kind = StabilizationKind::PressureLaplacian;
};

/// Blocks of the staggered-grid Stokes/Oseen model on the unit square:
/// velocity on cell faces, pressure at cell centres (last one pinned).
struct StokesLikeBlocks {
  Matrix mass;        // M, SPD
  Matrix a_h;         // Hermitian part of the velocity operator, -a_h >= 0
  Matrix a_s;         // skew convection part
  Matrix b;           // B, so that B* is the discrete divergence
  Matrix c;           // stabilization block, -c >= 0
  Index n_velocity = 0;
  Index n_pressure = 0;
};

StokesLikeBlocks stokes_like_blocks(const StokesLikeParameters& p);

/// E = diag(M, 0), J = [[A_S, B], [-B*, 0]], R = diag(-A_H, -C).
DhDaeSystem assemble_stokes_like(const StokesLikeParameters& p);

/// Poroelastic model. quasi_stationary = false gives state (w, u, p) with
/// E = diag(Y, A, M); true drops Y and uses state (p, u, w) with
/// E = diag(M, A, 0). D maps displacement to pressure space (n_p x n_u).
DhDaeSystem assemble_poroelastic(const Matrix& a, const Matrix& m,
                                 const Matrix& y, const Matrix& k,
                                 const Matrix& d, bool quasi_stationary);

enum class DaeIndex { Zero = 0, One = 1, Two = 2 };

std::string_view to_string(DaeIndex i);

struct IndexReport {
  /// Meaningful only when regular is true.
  DaeIndex index = DaeIndex::Zero;
  bool regular = true;
  /// (n1, n2, n3, n4, n5) of the simplified staircase classification.
  std::array<Index, 5> block_sizes{};
  /// Orthonormal basis of ker E (n x dim ker E).
  Matrix nullspace_basis_of_e;
  /// J22 - R22 restricted to ker E.
  Matrix algebraic_block;
  /// Singular values behind each rank decision, in order: eigenvalues of E,
  /// singular values of the algebraic block, of the coupling block.
  std::vector<RealVector> rank_decisions;
  /// Regularity by det(s E - (J - R)) != 0 at three random real shifts.
  bool shift_check_regular = true;
};

/// Differentiation index of the pencil s E - (J - R) by successive
/// nullspace splitting. Rank decisions: sigma <= tol * sigma_max is zero.
IndexReport index_classify(const DhDaeSystem& sys, Real tol = 1e-10);

}  // namespace dhk
