#pragma once

#include "pdm/ladder.hpp"
#include "pdm/numcore.hpp"
#include "pdm/profiles.hpp"

#include <string>
#include <vector>

namespace pdm {

struct CoherentStateRecord {
  cplx z = 0.0;
  double alpha = 1.0;
  GridFunction psi;             // normalized
  double eigen_residual = 0.0;  // ||(Q - z) psi|| / ||psi|| from the analytic exponent derivative
  double discrete_residual = 0.0;  // same quantity with the banded lowering operator, interior nodes
  double norm_before = 0.0;     // norm of the unnormalized samples (peak of |psi| scaled to one)
};

// Normalized U^(alpha-1) exp(-int W_alpha dmu).
GridFunction cs_ground_state(const MassProfile& p, const SuperpotentialFamily& Wfam, double alpha, const Grid& grid);

// psi_z proportional to U^(alpha-1) exp(sqrt2 z W_alpha + ((1-2 alpha)/sqrt2) z U' - int W_alpha dmu).
// z must be purely imaginary.
CoherentStateRecord cs_construct(cplx z, double alpha, const MassProfile& p, const SuperpotentialFamily& Wfam,
                                 const Grid& grid);

// U^(alpha-1) exp(sqrt2 z mu - int W_alpha dmu), which solves Q psi = z psi for every profile.
CoherentStateRecord cs_exact_eigenfunction(cplx z, double alpha, const MassProfile& p,
                                           const SuperpotentialFamily& Wfam, const Grid& grid);

struct MirroredState {
  CoherentStateRecord state;   // direct construction at 1 - alpha
  GridFunction via_factor;     // |z; alpha> times the functional factor, normalized
  double factor_check = 0.0;   // L2 distance between the two after phase alignment
  double factor_spread = 0.0;  // max |factor| / min |factor| - 1 over the box (zero when the factor is constant)
};

MirroredState cs_mirrored(cplx z, double alpha, const MassProfile& p, const SuperpotentialFamily& Wfam,
                          const Grid& grid);

struct DisplacementReport {
  double res_lower = 0.0;   // max_f ||(D+ Q D - Q - z [Q,Q+]) f|| / ||f||
  double res_raise = 0.0;   // max_f ||(D+ Q+ D - Q+ - z* [Q,Q+]) f|| / ||f||
  double prop_lower = 0.0;  // max_f ||([S,Q] - i z G) f|| / ||f||, S = -i z (Q + Q+)
  double prop_raise = 0.0;  // max_f ||([S,Q+] + i z G) f|| / ||f||
  bool central = false;     // commutator function constant on the grid
};

// Largest |z| accepted by the dense displacement check.
constexpr double kMaxDisplacement = 10.0;
// Largest grid accepted by the dense displacement check.
constexpr int kMaxDenseNodes = 400;

DisplacementReport displacement_conjugation_check(cplx z, const LadderPair& pair, const GridFunction& commutator,
                                                  const Grid& grid);

struct Observables {
  LinearDifferentialOperator W_hat;   // (1/sqrt2)(Q + Q+) - ((1-2 alpha)/sqrt2) U'
  LinearDifferentialOperator Pi_hat;  // (-i/sqrt2)(Q - Q+)
};

Observables observables(const MassProfile& p, const SuperpotentialFamily& Wfam, double alpha, const Grid& grid);

struct ExpectationReport {
  // quadrature column
  cplx W = 0.0, Pi = 0.0, W2 = 0.0, Pi2 = 0.0;
  // closed-form column, every x-dependent term averaged against |psi|^2
  cplx W_closed = 0.0, Pi_closed = 0.0, W2_closed = 0.0, Pi2_closed = 0.0;
  // raw right-hand sides as functions of x (Pi_rhs excludes the constant -2 z^2)
  GridFunction W_rhs, W2_rhs, Pi2_rhs;
};

ExpectationReport expectations(const CoherentStateRecord& state, const MassProfile& p,
                               const SuperpotentialFamily& Wfam, const Grid& grid);

enum class GurClass { saturated, minimized, violated_tolerance };
enum class WSign { positive, negative, indeterminate, unconstrained };

std::string to_string(GurClass c);
std::string to_string(WSign s);

struct SignRegion {
  double x_begin = 0.0;
  double x_end = 0.0;
  int sign_of_driver = 0;    // sign of (1-2 alpha) U' over the region
  int required_sign = 0;     // +1 for case C1, -1 for case C2
  bool satisfied = false;    // W_alpha + (1-2 alpha) U'/2 has the required sign on every node of the region
};

struct SignVerdict {
  WSign sign = WSign::indeterminate;
  std::vector<SignRegion> regions;
  std::string summary;
};

SignVerdict minimization_and_sign(const MassProfile& p, const SuperpotentialFamily& Wfam, double alpha,
                                  const Grid& grid);

struct GurReport {
  double var_W = 0.0;
  double var_Pi = 0.0;
  double product = 0.0;
  double commutator_expect = 0.0;
  double R_expect = 0.0;
  double bound = 0.0;          // (1/4) <[Q,Q+]>^2
  double rhs_identity = 0.0;   // (1/4) <[Q,Q+]>^2 - (1/2) <R> <[Q,Q+]>
  GridFunction R_alpha_values;
  GurClass classification = GurClass::violated_tolerance;
  WSign sign_of_W = WSign::indeterminate;
};

GurReport gur_product(const CoherentStateRecord& state, const MassProfile& p, const SuperpotentialFamily& Wfam,
                      double alpha, const Grid& grid);

}  // namespace pdm
