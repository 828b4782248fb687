#include "catch_amalgamated.hpp"

#include "pdm/hamiltonian.hpp"

#include <cmath>

using namespace pdm;
using Catch::Matchers::WithinAbs;

namespace {

SuperpotentialFamily linear_x() { return SuperpotentialFamily{}; }

SuperpotentialFamily closed_mu() {
  SuperpotentialFamily w;
  w.kind = SuperpotentialKind::closed_form_in_alpha;
  w.base = SuperpotentialBase::linear_mu;
  return w;
}

SuperpotentialFamily saturating() {
  SuperpotentialFamily w;
  w.kind = SuperpotentialKind::saturating;
  return w;
}

GridFunction harmonic_potential(const Grid& g) {
  RVec v(g.n);
  for (int i = 0; i < g.n; ++i) v[i] = 0.5 * g.x(i) * g.x(i);
  return GridFunction::from_real(g, v);
}

double operator_gap(const LinearDifferentialOperator& a, const LinearDifferentialOperator& b, const Grid& g) {
  double worst = 0.0;
  for (const GridFunction& f : gaussian_test_set(g)) {
    CVec d = a.apply(f.values) - b.apply(f.values);
    d[0] = d[g.n - 1] = 0.0;
    worst = std::max(worst, l2_norm(g, d) / l2_norm(f));
  }
  return worst;
}

}  // namespace

TEST_CASE("harmonic effective potential", "[hamiltonian]") {
  // W = x, U = 1: v_eff = (x^2 - 1)/2 + epsilon for every alpha
  const Grid g = make_grid(-4.0, 4.0, 81);
  for (double alpha : {0.0, 0.4, 1.0}) {
    const EffectivePotential v = effective_potential(constant_profile(1.0), linear_x(), alpha, 0.25, g);
    for (int i = 0; i < g.n; ++i) CHECK_THAT(v.v_eff.values[i].real(), WithinAbs(0.5 * g.x(i) * g.x(i) - 0.5 + 0.25, 1e-14));
    CHECK(v.v_U.real().cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("mirrored potential is the potential at the mirrored ordering", "[hamiltonian]") {
  const Grid g = make_grid(-3.0, 3.0, 121);
  for (double alpha : {0.0, 0.25, 0.5}) {
    const MirroredPotential m = mirrored_effective_potential(rational_profile(2.0), closed_mu(), alpha, 0.1, g);
    const EffectivePotential e = effective_potential(rational_profile(2.0), closed_mu(), 1.0 - alpha, 0.1, g);
    CHECK((m.v_alpha_bar.values - e.v_alpha.values).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((m.v_U_bar.values - e.v_U.values).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("saturating superpotential makes the effective potential independent of alpha", "[hamiltonian]") {
  // U = 1 + x^2 and W = (alpha - 1/2) 2x give v_eff = -x^2 - 1/2 + epsilon for every alpha
  const Grid g = make_grid(-4.0, 4.0, 801);
  for (const MassProfile& p : {constant_profile(1.0), rational_profile(2.0), inverse_quadratic_profile()}) {
    const RVec a = effective_potential(p, saturating(), 0.3, 0.0, g).v_eff.real();
    const RVec b = effective_potential(p, saturating(), 0.7, 0.0, g).v_eff.real();
    CHECK((a - b).cwiseAbs().maxCoeff() < 1e-10);
  }
  const RVec v = effective_potential(inverse_quadratic_profile(), saturating(), 0.3, 0.125, g).v_eff.real();
  CHECK_THAT(v[500], WithinAbs(-1.5 + 0.125, 1e-10));
}

TEST_CASE("reference ground energy of the harmonic oscillator", "[hamiltonian]") {
  const Grid g = make_grid(-12.0, 12.0, 4001);
  const HamiltonianBundle h = assemble_direct(constant_profile(1.0), harmonic_potential(g), 0.0, g);
  CHECK(h.op.symmetry_flag());
  CHECK_THAT(ground_energy_epsilon(h), WithinAbs(0.5, 1e-5));
}

TEST_CASE("factorized harmonic spectrum", "[hamiltonian]") {
  const Grid g = make_grid(-12.0, 12.0, 4001);
  const LadderPair pair = build_q_pair(constant_profile(1.0), linear_x(), make_ordering(1.0), g);
  const HamiltonianBundle h = assemble_factorized(pair, 0.5);
  CHECK(h.assembly_path == AssemblyPath::factorized);
  const SpectralResult s = solve_eig(h.op, 6);
  for (int k = 0; k < 6; ++k) CHECK_THAT(s.eigenvalues[k], WithinAbs(k + 0.5, 1e-4));
}

TEST_CASE("partner Hamiltonian drops the ground level", "[hamiltonian]") {
  const Grid g = make_grid(-12.0, 12.0, 4001);
  const LadderPair pair = build_q_pair(constant_profile(1.0), linear_x(), make_ordering(1.0), g);
  const HamiltonianBundle h = assemble_partner(pair, 0.5);
  CHECK(h.op.grid().n == g.n - 1);
  const SpectralResult s = solve_eig(h.op, 3);
  for (int k = 0; k < 3; ++k) CHECK_THAT(s.eigenvalues[k], WithinAbs(k + 1.5, 1e-4));
}

TEST_CASE("direct and factorized assemblies agree on the test set", "[hamiltonian]") {
  const Grid g = make_grid(-10.0, 10.0, 4001);
  for (double alpha : {0.0, 0.5, 1.0}) {
    const LadderPair pair = build_Qalpha_pair(rational_profile(2.0), closed_mu(), alpha, g);
    const HamiltonianBundle fac = assemble_factorized(pair, 0.0);
    const EffectivePotential v = effective_potential(rational_profile(2.0), closed_mu(), alpha, 0.0, g);
    const HamiltonianBundle dir = assemble_direct(rational_profile(2.0), v.v_eff, 0.0, g);
    CHECK(operator_gap(fac.op, dir.op, g) < 1e-4);
  }
}

TEST_CASE("kinetic orderings differ by multiplicative potentials", "[hamiltonian]") {
  const Grid g = make_grid(-6.0, 6.0, 2001);
  SuperpotentialFamily none;
  none.base = SuperpotentialBase::zero;
  for (const MassProfile& p : {rational_profile(2.0), inverse_quadratic_profile()}) {
    const LinearDifferentialOperator bdd = table1_kinetic(p, KineticVariant::BDD, g);
    const LinearDifferentialOperator zk = table1_kinetic(p, KineticVariant::ZK, g);
    const LinearDifferentialOperator bbqt = table1_kinetic(p, KineticVariant::BBQT, g);
    CHECK(bdd.symmetry_flag());
    CHECK(zk.symmetry_flag());
    const GridFunction v0 = effective_potential(p, none, 0.0, 0.0, g).v_U;
    const GridFunction vh = effective_potential(p, none, 0.5, 0.0, g).v_U;
    for (const GridFunction& f : gaussian_test_set(g)) {
      const CVec d0 = zk.apply(f.values) - bdd.apply(f.values) - v0.values.cwiseProduct(f.values);
      const CVec dh = bbqt.apply(f.values) - bdd.apply(f.values) - vh.values.cwiseProduct(f.values);
      CHECK(interior_norm(g, d0) / l2_norm(f) < 1e-6);
      CHECK(interior_norm(g, dh) / l2_norm(f) < 1e-6);
    }
  }
}

TEST_CASE("kinetic variant names", "[hamiltonian]") {
  for (KineticVariant v : {KineticVariant::ZK, KineticVariant::BDD, KineticVariant::BBQT}) {
    CHECK(kinetic_variant_from_string(to_string(v)) == v);
  }
  CHECK_THROWS_MATCHES(kinetic_variant_from_string("vonRoos"), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) { return e.kind() == ErrorKind::unknown_variant; }));
}
