#pragma once

#include "pdm/ladder.hpp"
#include "pdm/numcore.hpp"
#include "pdm/profiles.hpp"

#include <vector>

namespace pdm {

// alpha -> 1 - alpha on [0, 1].
double mirror_alpha(double alpha);

struct Z2Intertwiner {
  double alpha = 0.5;
  GridFunction T_factor;               // U^(1-alpha) exp(int (W_alpha - W_(1-alpha))/2 dmu)
  LinearDifferentialOperator nabla;    // (1/sqrt2)(d/dx + (W_alpha + W_(1-alpha))/(2U))
  LinearDifferentialOperator assembled;  // T nabla T expanded as (1/sqrt2)(P d/dx + P'/2 + P sigma/(2U)), P = T^2
  GridFunction P;                      // T^2
  GridFunction zeroth;                 // P'/2 + P sigma/(2U)
};

// The exponential factor is anchored at the box midpoint, where it equals one.
Z2Intertwiner build_intertwiner_Z(const MassProfile& p, const SuperpotentialFamily& Wfam, double alpha,
                                  const Grid& grid);

struct IntertwinerResidual {
  double max_residual = 0.0;
  std::vector<double> per_function;
};

// max over f of ||Z Q_alpha f - Q_(1-alpha) Z f|| / ||Z f|| on interior nodes.
IntertwinerResidual intertwiner_residual(const Z2Intertwiner& Z, const LadderPair& pair_alpha,
                                         const LadderPair& pair_mirror, const std::vector<GridFunction>& test_set);

struct CoefficientSolution {
  GridFunction F;  // F^2 = P
  GridFunction G;  // zeroth-order part left after F F'
  double residual = 0.0;           // max relative mismatch of the d^1 and d^0 coefficient equations
  double P_discrepancy = 0.0;      // max |F^2 - P_closed| / max |P_closed|
  double zeroth_discrepancy = 0.0;  // max |F F' + G - zeroth_closed| / max |zeroth_closed|
  double operator_discrepancy = 0.0;  // max over the test set of ||(Z_solved - Z_closed) f|| / ||Z_closed f||
  bool flagged = false;            // any discrepancy above 1e-6
  std::string report;
};

// Solves Z Q_alpha = Q_(1-alpha) Z for Z = (1/sqrt2)(F^2 d/dx + F F' + G) by integrating the coefficient
// equations outward from the box midpoint, with the gauge constant fixed there.
CoefficientSolution solve_intertwiner_coefficients(const MassProfile& p, const SuperpotentialFamily& Wfam,
                                                   double alpha, const Grid& grid);

// Operator (1/sqrt2)(F^2 d/dx + F F' + G) built from a coefficient solution.
LinearDifferentialOperator assemble_from_coefficients(const CoefficientSolution& s);

// max over f of ||Z f - Q_(1/2) f|| / ||f|| at alpha = 1/2.
double fixed_point_check(const MassProfile& p, const SuperpotentialFamily& Wfam, const Grid& grid,
                         const std::vector<GridFunction>& test_set);

// Largest entrywise difference between Z and Q_(1/2) at alpha = 1/2.
double fixed_point_entrywise(const MassProfile& p, const SuperpotentialFamily& Wfam, const Grid& grid);

}  // namespace pdm
