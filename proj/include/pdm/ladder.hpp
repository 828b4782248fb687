#pragma once

#include "pdm/numcore.hpp"
#include "pdm/profiles.hpp"

#include <optional>
#include <vector>

namespace pdm {

// Staggered first-order factor A mapping interior nodes to cell midpoints:
//   (A f)_j = (u_j / (sqrt(2) h)) (f_{j+1} / r_j - r_j f_j),   r_j^2 = exp(log_ratio_j)
// The log ratios follow the local decay rate c/U of the zero mode with an h^3 correction, so that
// A^T A agrees with the flux-form kinetic plus effective potential to second order.
struct StaggeredFactor {
  Grid grid;        // node grid
  RVec u_mid;       // U at the n-1 midpoints
  RVec log_ratio;   // length n-1

  CVec apply(const CVec& f) const;            // nodes -> midpoints (boundary node values ignored)
  CVec apply_transpose(const CVec& g) const;  // midpoints -> nodes (boundary entries zero)
};

struct LadderPair {
  LinearDifferentialOperator lower;  // (1/sqrt2)(U D + c) with antisymmetric fourth-order D
  LinearDifferentialOperator raise;  // exact transpose of lower
  double alpha = 1.0;
  std::optional<double> lambda_param;
  GridFunction U;   // U at nodes
  GridFunction c;   // zeroth-order coefficient (1-alpha) U' + W
  StaggeredFactor factor;
};

// Builds a pair from sampled U, c on grid. u_mid holds U at the midpoints.
LadderPair make_ladder_pair(const Grid& grid, const RVec& U, const RVec& c, const RVec& u_mid, double alpha);

LadderPair build_q_pair(const MassProfile& p, const SuperpotentialFamily& w, const OrderingParams& ord,
                        const Grid& grid);

LadderPair build_Qalpha_pair(const MassProfile& p, const SuperpotentialFamily& Wfam, double alpha, const Grid& grid);

// Pair with a sampled superpotential (used for the Riccati-shifted operators).
LadderPair build_pair_from_samples(const MassProfile& p, const GridFunction& W, double alpha, const Grid& grid,
                                   std::optional<double> lambda_param = std::nullopt);

// Normalized U^(-1-2a) exp(-int w dmu). Throws non_normalizable when the domain-doubling ratio exceeds 1.01.
GridFunction ground_state_xi0(const MassProfile& p, const SuperpotentialFamily& w, const OrderingParams& ord,
                              const Grid& grid);

struct RiccatiShift {
  GridFunction W;            // w + phi
  GridFunction phi;          // U xi0^2 / (lambda + int xi0^2)
  GridFunction denominator;  // lambda + running integral of xi0^2 from x_min
};

RiccatiShift riccati_shift(const GridFunction& w, double lambda_param, const GridFunction& xi0, const GridFunction& U);

GridFunction build_W(const SuperpotentialFamily& w, double lambda_param, const GridFunction& xi0, const MassProfile& p,
                     const Grid& grid, double alpha);

// U W' + ((1-2 alpha)/2) U U''
GridFunction commutator_gdoa(const MassProfile& p, const SuperpotentialFamily& Wfam, double alpha, const Grid& grid);

struct GdoaReport {
  GridFunction commutator;
  double identity_residual = 0.0;  // [Q,Q+] f against multiplication, relative, interior nodes
  double hq_residual = 0.0;        // [H,Q] f + [Q,Q+] Q f
  double hqt_residual = 0.0;       // [H,Q+] f - Q+ [Q,Q+] f
};

GdoaReport gdoa_residuals(const MassProfile& p, const SuperpotentialFamily& Wfam, double alpha, const Grid& grid);

// Gaussians exp(-(x-c)^2) at five centres spanning the middle half of the box.
std::vector<GridFunction> gaussian_test_set(const Grid& grid);

// Nodes kept by the operator-identity checks (ten nodes dropped at each end).
constexpr int kInteriorMargin = 10;
double interior_norm(const Grid& g, const CVec& f);

// |<lower f, g> - <f, raise g>| for the given pair.
double adjoint_residual(const LadderPair& pair, const GridFunction& f, const GridFunction& g);

}  // namespace pdm
