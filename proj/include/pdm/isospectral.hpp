#pragma once

#include "pdm/hamiltonian.hpp"
#include "pdm/ladder.hpp"
#include "pdm/numcore.hpp"
#include "pdm/profiles.hpp"

#include <vector>

namespace pdm {

struct IsospectralFamily {
  double lambda_param = 1.0;
  LadderPair base_pair;     // (q, q+)
  LadderPair shifted_pair;  // (Q, Q+) with W = w + phi_lambda
  double epsilon = 0.0;
  GridFunction xi0;
  RiccatiShift shift;
  SpectralResult base_spectrum;         // q+q + epsilon
  SpectralResult transformed_spectrum;  // Q+Q + epsilon
  SpectralResult partner_spectrum;      // Q Q+ + epsilon (equal to q q+ + epsilon)
};

// Builds both pairs and solves the three spectra for k levels.
IsospectralFamily build_isospectral_family(const MassProfile& p, const SuperpotentialFamily& w,
                                           const OrderingParams& ord, const Grid& grid, double lambda_param,
                                           double epsilon, int k);

// Eigenpairs of -1/2 d/dx U^2 d/dx + v_eff in the fourth-order pentadiagonal form, used as accurate xi_n.
SpectralResult base_states_fourth_order(const MassProfile& p, const SuperpotentialFamily& w,
                                        const OrderingParams& ord, const Grid& grid, double epsilon, int k);

// xi0 / (lambda + int xi0^2), normalized.
GridFunction transformed_ground(double lambda_param, const GridFunction& xi0, const Grid& grid);

struct TransformedState {
  GridFunction via_intertwiner;   // Q+ q xi_n / (E_n - epsilon), normalized
  GridFunction via_closed_form;   // xi_n + phi q xi_n / (sqrt2 (E_n - epsilon)), normalized
  GridFunction via_literal_coefficient;  // xi_n + phi q xi_n / (2 (E_n - epsilon)), normalized
  double distance = 0.0;          // between the first two
  double literal_distance = 0.0;  // between the intertwiner form and the literal coefficient
};

TransformedState transform_state(const GridFunction& xi_n, double E_n, double epsilon, double lambda_param,
                                 const LadderPair& base_pair, const GridFunction& xi0, const Grid& grid);

struct MissingState {
  GridFunction state;
  bool normalizable = false;
  double doubling_ratio = 0.0;
};

// U^(-alpha) exp(+int w dmu), annihilated by q+.
MissingState missing_state(const MassProfile& p, const SuperpotentialFamily& w, const OrderingParams& ord,
                           const Grid& grid);

// max over f of ||(Q+Q)(Q+q) f - (Q+q)(q+q) f|| / ||f||
double intertwining_residual(const LadderPair& base_pair, const LadderPair& shifted_pair, double epsilon,
                             const Grid& grid, const std::vector<GridFunction>& test_set);

struct SpectrumMatch {
  std::vector<double> abs_diff;  // level n = 1.. against level n = 1..
  double max_diff = 0.0;
  bool matched = false;
  int epsilon_count = 0;         // transformed levels within tol of epsilon
};

SpectrumMatch spectrum_match(const SpectralResult& base, const SpectralResult& transformed, double epsilon,
                             double tol);

// Number of levels within tol of epsilon.
int count_level(const SpectralResult& s, double level, double tol);

}  // namespace pdm
