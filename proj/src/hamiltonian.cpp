#include "pdm/hamiltonian.hpp"

#include <cmath>

namespace pdm {

namespace {

const char* kModule = "hamiltonian";

// Fourth-order flux form of -(a f')' as (4 F_h - F_2h)/3 on the interior block.
LinearDifferentialOperator flux4(const Grid& g, const RVec& a_mid, const RVec& a_node) {
  const int n = g.n;
  const double h2 = g.h * g.h;
  LinearDifferentialOperator k(g, 2);
  for (int i = 1; i < n - 1; ++i) {
    k.set(i, i, 4.0 / 3.0 * (a_mid[i - 1] + a_mid[i]) / h2 - (a_node[i + 1] + a_node[i - 1]) / (12.0 * h2));
    if (i + 1 < n - 1) k.set(i, i + 1, -4.0 / 3.0 * a_mid[i] / h2);
    if (i - 1 > 0) k.set(i, i - 1, -4.0 / 3.0 * a_mid[i - 1] / h2);
    if (i + 2 < n - 1) k.set(i, i + 2, a_node[i + 1] / (12.0 * h2));
    if (i - 2 > 0) k.set(i, i - 2, a_node[i - 1] / (12.0 * h2));
  }
  k.set_dirichlet(true);
  return k;
}

// scale * diag(r) a diag(r), written so that symmetric input stays bitwise symmetric
LinearDifferentialOperator scale_both_sides(const LinearDifferentialOperator& a, const RVec& r, double scale) {
  LinearDifferentialOperator out(a.grid(), a.bandwidth());
  out.set_dirichlet(a.dirichlet());
  const int n = a.size();
  for (int i = 0; i < n; ++i)
    for (int j = std::max(0, i - a.bandwidth()); j <= std::min(n - 1, i + a.bandwidth()); ++j)
      out.set(i, j, scale * (a.entry(i, j) * (r[i] * r[j])));
  return out;
}

RVec interior_diagonal(const Grid& g, const RVec& v) {
  RVec d = v;
  d[0] = 0.0;
  d[g.n - 1] = 0.0;
  return d;
}

}  // namespace

std::string to_string(AssemblyPath a) {
  switch (a) {
    case AssemblyPath::factorized: return "factorized";
    case AssemblyPath::partner: return "partner";
    case AssemblyPath::direct: return "direct";
    case AssemblyPath::table1: return "table1";
  }
  return "unknown";
}

std::string to_string(KineticVariant v) {
  switch (v) {
    case KineticVariant::ZK: return "ZK";
    case KineticVariant::BDD: return "BDD";
    case KineticVariant::BBQT: return "BBQT";
  }
  return "unknown";
}

KineticVariant kinetic_variant_from_string(const std::string& s) {
  if (s == "ZK") return KineticVariant::ZK;
  if (s == "BDD") return KineticVariant::BDD;
  if (s == "BBQT") return KineticVariant::BBQT;
  throw Error(ErrorKind::unknown_variant, kModule, "unknown kinetic variant '" + s + "' (expected ZK, BDD or BBQT)");
}

EffectivePotential effective_potential(const MassProfile& p, const SuperpotentialFamily& Wfam, double alpha,
                                       double epsilon, const Grid& grid) {
  ProfileSamples s = eval_profile(p, grid);
  SuperpotentialSamples w = eval_superpotential(Wfam, p, alpha, grid);
  const RVec U = s.U.real(), U1 = s.U1.real(), U2 = s.U2.real();
  const RVec W = w.W.real(), W1 = w.W1.real();
  const RVec va = (0.5 * W.array().square() - 0.5 * U.array() * W1.array() +
                   0.5 * (1.0 - 2.0 * alpha) * U1.array() * W.array() + epsilon)
                      .matrix();
  const RVec vu =
      (0.5 * alpha * (alpha - 1.0) * U1.array().square() + 0.5 * (alpha - 1.0) * U2.array() * U.array()).matrix();
  return EffectivePotential{GridFunction::from_real(grid, va), GridFunction::from_real(grid, vu),
                            GridFunction::from_real(grid, va + vu)};
}

MirroredPotential mirrored_effective_potential(const MassProfile& p, const SuperpotentialFamily& Wfam, double alpha,
                                               double epsilon, const Grid& grid) {
  ProfileSamples s = eval_profile(p, grid);
  SuperpotentialSamples w = eval_superpotential(Wfam, p, 1.0 - alpha, grid);
  const RVec U = s.U.real(), U1 = s.U1.real(), U2 = s.U2.real();
  const RVec W = w.W.real(), W1 = w.W1.real();
  const RVec va = (0.5 * W.array().square() - 0.5 * U.array() * W1.array() -
                   0.5 * (1.0 - 2.0 * alpha) * U1.array() * W.array() + epsilon)
                      .matrix();
  const RVec vu = (0.5 * alpha * (alpha - 1.0) * U1.array().square() - 0.5 * alpha * U2.array() * U.array()).matrix();
  return MirroredPotential{GridFunction::from_real(grid, va), GridFunction::from_real(grid, vu)};
}

HamiltonianBundle assemble_factorized(const LadderPair& pair, double epsilon) {
  const StaggeredFactor& f = pair.factor;
  const Grid& g = f.grid;
  const int n = g.n;
  const double h2 = g.h * g.h;
  LinearDifferentialOperator op(g, 1);
  RVec veff = RVec::Zero(n);
  for (int i = 1; i < n - 1; ++i) {
    const double ul = f.u_mid[i - 1], ur = f.u_mid[i];
    const double d = 0.5 * (ul * ul * std::exp(-f.log_ratio[i - 1]) + ur * ur * std::exp(f.log_ratio[i])) / h2;
    op.set(i, i, d + epsilon);
    veff[i] = d - 0.5 * (ul * ul + ur * ur) / h2 + epsilon;
    if (i + 1 < n - 1) {
      op.set(i, i + 1, -0.5 * ur * ur / h2);
      op.set(i + 1, i, -0.5 * ur * ur / h2);
    }
  }
  op.set_dirichlet(true);
  HamiltonianBundle b;
  b.assembly_path = AssemblyPath::factorized;
  b.op = op;
  b.alpha = pair.alpha;
  b.epsilon = epsilon;
  b.veff = GridFunction::from_real(g, veff);
  return b;
}

HamiltonianBundle assemble_partner(const LadderPair& pair, double epsilon) {
  const StaggeredFactor& f = pair.factor;
  const Grid mg = midpoint_grid(f.grid);
  const int m = mg.n;
  const double h2 = f.grid.h * f.grid.h;
  LinearDifferentialOperator op(mg, 1);
  RVec veff = RVec::Zero(m);
  for (int j = 1; j < m - 1; ++j) {
    const double u = f.u_mid[j];
    const double d = 0.5 * u * u / h2 * (std::exp(f.log_ratio[j]) + std::exp(-f.log_ratio[j]));
    op.set(j, j, d + epsilon);
    veff[j] = d - u * u / h2 + epsilon;
    if (j + 1 < m - 1) {
      const double v = -0.5 * u * f.u_mid[j + 1] / h2 * std::exp(0.5 * (f.log_ratio[j + 1] - f.log_ratio[j]));
      op.set(j, j + 1, v);
      op.set(j + 1, j, v);
    }
  }
  op.set_dirichlet(true);
  HamiltonianBundle b;
  b.assembly_path = AssemblyPath::partner;
  b.op = op;
  b.alpha = pair.alpha;
  b.epsilon = epsilon;
  b.veff = GridFunction::from_real(mg, veff);
  return b;
}

HamiltonianBundle assemble_direct(const MassProfile& p, const GridFunction& v, double epsilon, const Grid& grid) {
  require_same_grid(v.grid, grid, kModule);
  ProfileSamples sm = eval_profile(p, midpoint_grid(grid));
  const RVec um = sm.U.real();
  const int n = grid.n;
  const double h2 = grid.h * grid.h;
  const RVec vr = v.real();
  LinearDifferentialOperator op(grid, 1);
  for (int i = 1; i < n - 1; ++i) {
    const double al = um[i - 1] * um[i - 1], ar = um[i] * um[i];
    op.set(i, i, 0.5 * (al + ar) / h2 + vr[i] + epsilon);
    if (i + 1 < n - 1) {
      op.set(i, i + 1, -0.5 * ar / h2);
      op.set(i + 1, i, -0.5 * ar / h2);
    }
  }
  op.set_dirichlet(true);
  HamiltonianBundle b;
  b.assembly_path = AssemblyPath::direct;
  b.op = op;
  b.epsilon = epsilon;
  b.veff = GridFunction::from_real(grid, interior_diagonal(grid, vr));
  return b;
}

LinearDifferentialOperator table1_kinetic(const MassProfile& p, KineticVariant variant, const Grid& grid) {
  ProfileSamples s = eval_profile(p, grid);
  ProfileSamples sm = eval_profile(p, midpoint_grid(grid));
  const RVec U = s.U.real(), um = sm.U.real();
  switch (variant) {
    case KineticVariant::ZK: {
      LinearDifferentialOperator k = flux4(grid, RVec::Ones(grid.n - 1), RVec::Ones(grid.n));
      return scale_both_sides(k, U, 0.5);
    }
    case KineticVariant::BDD: {
      LinearDifferentialOperator k = flux4(grid, um.cwiseProduct(um), U.cwiseProduct(U));
      return k * cplx(0.5);
    }
    case KineticVariant::BBQT: {
      LinearDifferentialOperator k = flux4(grid, um, U);
      const RVec r = U.cwiseSqrt();
      return scale_both_sides(k, r, 0.5);
    }
  }
  throw Error(ErrorKind::unknown_variant, kModule, "unknown kinetic variant");
}

HamiltonianBundle assemble_table1(const MassProfile& p, KineticVariant variant, const GridFunction& v,
                                  const Grid& grid) {
  require_same_grid(v.grid, grid, kModule);
  LinearDifferentialOperator k = table1_kinetic(p, variant, grid);
  const RVec vd = interior_diagonal(grid, v.real());
  LinearDifferentialOperator op = k + LinearDifferentialOperator::diagonal(grid, vd);
  op.set_dirichlet(true);
  HamiltonianBundle b;
  b.assembly_path = AssemblyPath::table1;
  b.op = op;
  b.alpha = variant == KineticVariant::ZK ? 0.0 : (variant == KineticVariant::BDD ? 1.0 : 0.5);
  b.veff = GridFunction::from_real(grid, vd);
  return b;
}

double ground_energy_epsilon(const HamiltonianBundle& h) { return solve_eig(h.op, 1).eigenvalues[0]; }

}  // namespace pdm
