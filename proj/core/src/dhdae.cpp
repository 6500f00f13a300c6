#include "dhkrylov/dhdae.hpp"

#include <sstream>

#include "dhkrylov/hs_core.hpp"

namespace dhk {

namespace {

void require_model(bool ok, const std::string& msg) {
  if (!ok) throw ModelError(msg);
}

void require_square_model(const Matrix& m, const char* name) {
  if (m.rows() != m.cols()) {
    std::ostringstream os;
    os << name << " must be square, got " << m.rows() << "x" << m.cols();
    throw ModelError(os.str());
  }
}

bool is_hpd(const Matrix& m) {
  return is_hermitian(m) &&
         definiteness_class(m) == Definiteness::PositiveDefinite;
}

bool is_hpsd(const Matrix& m) {
  if (m.size() == 0) return true;
  if (!is_hermitian(m)) return false;
  return definiteness_class(m) != Definiteness::Indefinite;
}

}  // namespace

Vector DhDaeSystem::source(Real t) const {
  if (!f) return Vector::Zero(order());
  Vector v = f(t);
  if (v.size() != order()) {
    throw DimensionError("DhDaeSystem::source: f(t) has wrong length");
  }
  return v;
}

void DhDaeSystem::validate(Real tol) const {
  const Index n = e.rows();
  if (e.cols() != n || j.rows() != n || j.cols() != n || r.rows() != n ||
      r.cols() != n) {
    throw DimensionError("DhDaeSystem: E, J, R must be square of equal order");
  }
  Index labelled = 0;
  for (const auto& b : blocks) labelled += b.size;
  if (!blocks.empty() && labelled != n) {
    throw ModelError("DhDaeSystem: block labels do not cover the state");
  }
  if (!is_hermitian(e, tol)) throw StructureError("DhDaeSystem: E not Hermitian");
  if (!is_hermitian(r, tol)) throw StructureError("DhDaeSystem: R not Hermitian");
  if (!is_skew_hermitian(j, tol)) {
    throw StructureError("DhDaeSystem: J not skew-Hermitian");
  }
  if (n > 0 && definiteness_class(e, tol) == Definiteness::Indefinite) {
    throw ModelError("DhDaeSystem: E is indefinite");
  }
  if (n > 0 && max_abs(r) > 0 &&
      definiteness_class(r, tol) == Definiteness::Indefinite) {
    throw ModelError("DhDaeSystem: R is indefinite");
  }
}

SourceFunction zero_source(Index n) {
  return [n](Real) { return Vector(Vector::Zero(n)); };
}

DhDaeSystem make_dhdae(Matrix e, Matrix j, Matrix r, SourceFunction f,
                       std::vector<VariableBlock> blocks, Real tol) {
  DhDaeSystem sys{std::move(e), std::move(j), std::move(r), std::move(f),
                  std::move(blocks)};
  if (!sys.f) sys.f = zero_source(sys.order());
  sys.validate(tol);
  return sys;
}

DhDaeSystem assemble_mechanical(const Matrix& m, const Matrix& d,
                                const Matrix& k, SourceFunction force) {
  require_square_model(m, "M");
  require_square_model(d, "D");
  require_square_model(k, "K");
  const Index n = m.rows();
  require_model(d.rows() == n && k.rows() == n,
                "assemble_mechanical: M, D, K differ in order");
  require_model(is_hpd(m), "assemble_mechanical: M is not positive definite");
  require_model(is_hpd(k), "assemble_mechanical: K is not positive definite");
  require_model(is_hpsd(d), "assemble_mechanical: D is not positive semidefinite");

  Matrix e = Matrix::Zero(2 * n, 2 * n);
  Matrix j = Matrix::Zero(2 * n, 2 * n);
  Matrix r = Matrix::Zero(2 * n, 2 * n);
  e.topLeftCorner(n, n) = m;
  e.bottomRightCorner(n, n) = k;
  j.topRightCorner(n, n) = -k;
  j.bottomLeftCorner(n, n) = k;
  r.topLeftCorner(n, n) = d;

  SourceFunction f;
  if (force) {
    f = [n, force](Real t) {
      Vector out = Vector::Zero(2 * n);
      Vector g = force(t);
      if (g.size() != n) {
        throw DimensionError("assemble_mechanical: force has wrong length");
      }
      out.head(n) = g;
      return out;
    };
  }
  return make_dhdae(std::move(e), std::move(j), std::move(r), std::move(f),
                    {{"velocity", n}, {"displacement", n}});
}

DhDaeSystem assemble_rlc(const RlcParameters& p, std::function<Real(Real)> e_g) {
  for (Real v : {p.inductance, p.capacitance1, p.capacitance2, p.resistance_g,
                 p.resistance_l, p.resistance_r}) {
    require_model(v > 0, "assemble_rlc: all circuit parameters must be positive");
  }
  Matrix e = Matrix::Zero(5, 5);
  e.diagonal().head(3) << p.inductance, p.capacitance1, p.capacitance2;

  Matrix j(5, 5);
  j << 0, -1, 1, 0, 0,
       1, 0, 0, -1, 0,
      -1, 0, 0, 0, -1,
       0, 1, 0, 0, 0,
       0, 0, 1, 0, 0;

  Matrix r = Matrix::Zero(5, 5);
  r(0, 0) = p.resistance_l;
  r(3, 3) = p.resistance_g;
  r(4, 4) = p.resistance_r;

  SourceFunction f;
  if (e_g) {
    f = [e_g](Real t) {
      Vector out = Vector::Zero(5);
      out(3) = e_g(t);
      return out;
    };
  }
  return make_dhdae(std::move(e), std::move(j), std::move(r), std::move(f),
                    {{"I", 1}, {"V1", 1}, {"V2", 1}, {"I_G", 1}, {"I_R", 1}});
}

StokesLikeBlocks stokes_like_blocks(const StokesLikeParameters& p) {
  const Index nn = p.grid_n;
  require_model(nn >= 2, "stokes_like: grid_n must be at least 2");
  require_model(p.viscosity > 0, "stokes_like: viscosity must be positive");
  require_model(p.stabilization >= 0,
                "stokes_like: stabilization must be nonnegative");
  const Real h = Real(1) / Real(nn);

  // u lives on vertical faces x = i h (i = 1..N-1) at cell-centre heights,
  // v on horizontal faces y = j h (j = 1..N-1).
  const Index n_u = (nn - 1) * nn;
  const Index n_vel = 2 * n_u;
  auto iu = [nn](Index i, Index j) { return (i - 1) * nn + j; };
  auto iv = [nn, n_u](Index i, Index j) { return n_u + i * (nn - 1) + (j - 1); };

  Matrix lap = Matrix::Zero(n_vel, n_vel);
  Matrix adv = Matrix::Zero(n_vel, n_vel);
  const Real a = p.convection * h / 2;
  for (Index i = 1; i < nn; ++i) {
    for (Index j = 0; j < nn; ++j) {
      const Index row = iu(i, j);
      lap(row, row) = 4;
      if (i > 1) lap(row, iu(i - 1, j)) = -1, adv(row, iu(i - 1, j)) = a;
      if (i < nn - 1) lap(row, iu(i + 1, j)) = -1, adv(row, iu(i + 1, j)) = -a;
      if (j > 0) lap(row, iu(i, j - 1)) = -1;
      if (j < nn - 1) lap(row, iu(i, j + 1)) = -1;
    }
  }
  for (Index i = 0; i < nn; ++i) {
    for (Index j = 1; j < nn; ++j) {
      const Index row = iv(i, j);
      lap(row, row) = 4;
      if (i > 0) lap(row, iv(i - 1, j)) = -1, adv(row, iv(i - 1, j)) = a;
      if (i < nn - 1) lap(row, iv(i + 1, j)) = -1, adv(row, iv(i + 1, j)) = -a;
      if (j > 1) lap(row, iv(i, j - 1)) = -1;
      if (j < nn - 1) lap(row, iv(i, j + 1)) = -1;
    }
  }

  // Divergence over cells scaled by h; the last cell is dropped so the
  // constant pressure mode disappears and B* has full row rank.
  const Index n_p = nn * nn - 1;
  Matrix div = Matrix::Zero(n_p, n_vel);
  Matrix lap_p = Matrix::Zero(n_p, n_p);
  auto cell = [nn](Index i, Index j) { return i * nn + j; };
  for (Index i = 0; i < nn; ++i) {
    for (Index j = 0; j < nn; ++j) {
      const Index c = cell(i, j);
      if (c >= n_p) continue;
      if (i + 1 < nn) div(c, iu(i + 1, j)) += h;
      if (i >= 1) div(c, iu(i, j)) -= h;
      if (j + 1 < nn) div(c, iv(i, j + 1)) += h;
      if (j >= 1) div(c, iv(i, j)) -= h;
      const Index nbrs[4][2] = {{i - 1, j}, {i + 1, j}, {i, j - 1}, {i, j + 1}};
      for (const auto& q : nbrs) {
        if (q[0] < 0 || q[0] >= nn || q[1] < 0 || q[1] >= nn) continue;
        lap_p(c, c) += 1;
        const Index d = cell(q[0], q[1]);
        if (d < n_p) lap_p(c, d) = -1;
      }
    }
  }

  StokesLikeBlocks out;
  out.n_velocity = n_vel;
  out.n_pressure = n_p;
  out.mass = h * h * Matrix::Identity(n_vel, n_vel);
  out.a_h = -p.viscosity * lap;
  out.a_s = adv;
  out.b = div.adjoint();
  if (p.stabilization_kind == StabilizationKind::Identity) {
    out.c = -p.stabilization * Matrix::Identity(n_p, n_p);
  } else {
    out.c = -p.stabilization * lap_p;
  }
  return out;
}

DhDaeSystem assemble_stokes_like(const StokesLikeParameters& p) {
  const StokesLikeBlocks blk = stokes_like_blocks(p);
  const Index nv = blk.n_velocity;
  const Index np = blk.n_pressure;
  const Index n = nv + np;
  Matrix e = Matrix::Zero(n, n);
  Matrix j = Matrix::Zero(n, n);
  Matrix r = Matrix::Zero(n, n);
  e.topLeftCorner(nv, nv) = blk.mass;
  j.topLeftCorner(nv, nv) = blk.a_s;
  j.topRightCorner(nv, np) = blk.b;
  j.bottomLeftCorner(np, nv) = -blk.b.adjoint();
  r.topLeftCorner(nv, nv) = -blk.a_h;
  r.bottomRightCorner(np, np) = -blk.c;
  return make_dhdae(std::move(e), std::move(j), std::move(r), {},
                    {{"velocity", nv}, {"pressure", np}});
}

DhDaeSystem assemble_poroelastic(const Matrix& a, const Matrix& m,
                                 const Matrix& y, const Matrix& k,
                                 const Matrix& d, bool quasi_stationary) {
  require_square_model(a, "A");
  require_square_model(m, "M");
  require_square_model(k, "K");
  const Index nu = a.rows();
  const Index np = m.rows();
  require_model(k.rows() == np, "assemble_poroelastic: K must match M");
  require_model(d.rows() == np && d.cols() == nu,
                "assemble_poroelastic: D must be n_p x n_u");
  require_model(is_hpd(a), "assemble_poroelastic: A is not positive definite");
  require_model(is_hpd(m), "assemble_poroelastic: M is not positive definite");
  require_model(is_hpsd(k), "assemble_poroelastic: K is not positive semidefinite");

  const Index n = 2 * nu + np;
  Matrix e = Matrix::Zero(n, n);
  Matrix j = Matrix::Zero(n, n);
  Matrix r = Matrix::Zero(n, n);
  std::vector<VariableBlock> blocks;
  if (!quasi_stationary) {
    require_square_model(y, "Y");
    require_model(y.rows() == nu, "assemble_poroelastic: Y must match A");
    require_model(is_hpd(y), "assemble_poroelastic: Y is not positive definite");
    // state (w, u, p)
    e.block(0, 0, nu, nu) = y;
    e.block(nu, nu, nu, nu) = a;
    e.block(2 * nu, 2 * nu, np, np) = m;
    j.block(0, nu, nu, nu) = -a;
    j.block(0, 2 * nu, nu, np) = d.adjoint();
    j.block(nu, 0, nu, nu) = a;
    j.block(2 * nu, 0, np, nu) = -d;
    r.block(2 * nu, 2 * nu, np, np) = k;
    blocks = {{"w", nu}, {"u", nu}, {"p", np}};
  } else {
    // state (p, u, w)
    e.block(0, 0, np, np) = m;
    e.block(np, np, nu, nu) = a;
    j.block(0, np + nu, np, nu) = -d;
    j.block(np, np + nu, nu, nu) = a;
    j.block(np + nu, 0, nu, np) = d.adjoint();
    j.block(np + nu, np, nu, nu) = -a;
    r.block(0, 0, np, np) = k;
    blocks = {{"p", np}, {"u", nu}, {"w", nu}};
  }
  return make_dhdae(std::move(e), std::move(j), std::move(r), {},
                    std::move(blocks));
}

std::string_view to_string(DaeIndex i) {
  switch (i) {
    case DaeIndex::Zero:
      return "0";
    case DaeIndex::One:
      return "1";
    case DaeIndex::Two:
      return "2";
  }
  return "?";
}

}  // namespace dhk
