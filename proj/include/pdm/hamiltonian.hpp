#pragma once

#include "pdm/ladder.hpp"
#include "pdm/numcore.hpp"
#include "pdm/profiles.hpp"

#include <string>

namespace pdm {

enum class AssemblyPath { factorized, partner, direct, table1 };
enum class KineticVariant { ZK, BDD, BBQT };

std::string to_string(AssemblyPath a);
std::string to_string(KineticVariant v);
KineticVariant kinetic_variant_from_string(const std::string& s);

struct HamiltonianBundle {
  AssemblyPath assembly_path = AssemblyPath::direct;
  LinearDifferentialOperator op;
  double alpha = 1.0;
  double epsilon = 0.0;
  GridFunction veff;
};

struct EffectivePotential {
  GridFunction v_alpha;  // includes epsilon
  GridFunction v_U;
  GridFunction v_eff;    // v_alpha + v_U
};

EffectivePotential effective_potential(const MassProfile& p, const SuperpotentialFamily& Wfam, double alpha,
                                       double epsilon, const Grid& grid);

struct MirroredPotential {
  GridFunction v_alpha_bar;  // includes epsilon
  GridFunction v_U_bar;
};

MirroredPotential mirrored_effective_potential(const MassProfile& p, const SuperpotentialFamily& Wfam, double alpha,
                                               double epsilon, const Grid& grid);

// Q+Q + epsilon as a tridiagonal Dirichlet operator built from the staggered factor.
HamiltonianBundle assemble_factorized(const LadderPair& pair, double epsilon);

// Q Q+ + epsilon on the midpoint grid with Dirichlet ends (the outermost midpoints are dropped).
HamiltonianBundle assemble_partner(const LadderPair& pair, double epsilon);

// -1/2 d/dx U^2 d/dx + v + epsilon in flux form with midpoint values of U^2.
// v is the potential without the epsilon offset.
HamiltonianBundle assemble_direct(const MassProfile& p, const GridFunction& v, double epsilon, const Grid& grid);

// Fourth-order symmetric pentadiagonal realizations of the three kinetic orderings plus multiplication by v.
HamiltonianBundle assemble_table1(const MassProfile& p, KineticVariant variant, const GridFunction& v,
                                  const Grid& grid);

// Kinetic matrix of one ordering variant alone (no potential).
LinearDifferentialOperator table1_kinetic(const MassProfile& p, KineticVariant variant, const Grid& grid);

// Lowest eigenvalue of the assembled operator.
double ground_energy_epsilon(const HamiltonianBundle& h);

}  // namespace pdm
