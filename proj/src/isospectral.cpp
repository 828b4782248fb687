#include "pdm/isospectral.hpp"

#include <cmath>

namespace pdm {

namespace {

const char* kModule = "isospectral";
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

// L2 distance after aligning the global phase of b with a.
double aligned_distance(const GridFunction& a, const GridFunction& b) {
  cplx ov = inner_product(a, b);
  cplx phase = std::abs(ov) > 0 ? std::conj(ov) / std::abs(ov) : cplx(1.0);
  return l2_norm(a.grid, a.values - phase * b.values);
}

}  // namespace

IsospectralFamily build_isospectral_family(const MassProfile& p, const SuperpotentialFamily& w,
                                           const OrderingParams& ord, const Grid& grid, double lambda_param,
                                           double epsilon, int k) {
  IsospectralFamily fam;
  fam.lambda_param = lambda_param;
  fam.epsilon = epsilon;
  fam.base_pair = build_q_pair(p, w, ord, grid);
  fam.xi0 = ground_state_xi0(p, w, ord, grid);
  SuperpotentialSamples ws = eval_superpotential(w, p, ord.alpha, grid);
  fam.shift = riccati_shift(ws.W, lambda_param, fam.xi0, fam.base_pair.U);
  fam.shifted_pair = build_pair_from_samples(p, fam.shift.W, ord.alpha, grid, lambda_param);
  fam.base_spectrum = solve_eig(assemble_factorized(fam.base_pair, epsilon).op, k);
  fam.transformed_spectrum = solve_eig(assemble_factorized(fam.shifted_pair, epsilon).op, k);
  fam.partner_spectrum = solve_eig(assemble_partner(fam.shifted_pair, epsilon).op, k);
  return fam;
}

SpectralResult base_states_fourth_order(const MassProfile& p, const SuperpotentialFamily& w,
                                        const OrderingParams& ord, const Grid& grid, double epsilon, int k) {
  EffectivePotential v = effective_potential(p, w, ord.alpha, epsilon, grid);
  return solve_eig(assemble_table1(p, KineticVariant::BDD, v.v_eff, grid).op, k);
}

GridFunction transformed_ground(double lambda_param, const GridFunction& xi0, const Grid& grid) {
  require_same_grid(xi0.grid, grid, kModule);
  RiccatiShift s = riccati_shift(GridFunction::zeros(grid), lambda_param, xi0, GridFunction::zeros(grid));
  const CVec v = xi0.values.cwiseQuotient(s.denominator.values);
  return normalized(GridFunction(grid, v));
}

TransformedState transform_state(const GridFunction& xi_n, double E_n, double epsilon, double lambda_param,
                                 const LadderPair& base_pair, const GridFunction& xi0, const Grid& grid) {
  require_same_grid(xi_n.grid, grid, kModule);
  const double gap = E_n - epsilon;
  if (std::abs(gap) < 1e-10) {
    throw Error(ErrorKind::degenerate_energy, kModule,
                "E_n - epsilon = " + std::to_string(gap) + " is too close to zero for the intertwiner");
  }
  RiccatiShift s = riccati_shift(GridFunction::zeros(grid), lambda_param, xi0, base_pair.U);
  const CVec phi = s.phi.values;
  const CVec qxi = base_pair.lower.apply(xi_n.values);
  const CVec Qt_qxi = base_pair.raise.apply(qxi) + kInvSqrt2 * phi.cwiseProduct(qxi);

  TransformedState out;
  out.via_intertwiner = normalized(GridFunction(grid, Qt_qxi / gap));
  out.via_closed_form = normalized(GridFunction(grid, xi_n.values + phi.cwiseProduct(qxi) * (kInvSqrt2 / gap)));
  out.via_literal_coefficient =
      normalized(GridFunction(grid, xi_n.values + phi.cwiseProduct(qxi) * (0.5 / gap)));
  out.distance = aligned_distance(out.via_intertwiner, out.via_closed_form);
  out.literal_distance = aligned_distance(out.via_intertwiner, out.via_literal_coefficient);
  return out;
}

MissingState missing_state(const MassProfile& p, const SuperpotentialFamily& w, const OrderingParams& ord,
                           const Grid& grid) {
  auto log_density = [&](const Grid& g) -> RVec {
    ProfileSamples s = eval_profile(p, g);
    SuperpotentialSamples ws = eval_superpotential(w, p, ord.alpha, g);
    const RVec U = s.U.real();
    const RVec expo = (2.0 * ord.a) * U.array().log().matrix() + cumulative_integral(g, ws.W.real().cwiseQuotient(U));
    return 2.0 * expo;
  };
  MissingState out;
  out.doubling_ratio = doubling_ratio(grid, log_density);
  out.normalizable = out.doubling_ratio < 1.01;
  RVec ld = log_density(grid);
  RVec v = (0.5 * (ld.array() - ld.maxCoeff())).exp().matrix();
  GridFunction st = GridFunction::from_real(grid, v);
  out.state = out.normalizable ? normalized(st) : st;
  return out;
}

double intertwining_residual(const LadderPair& base_pair, const LadderPair& shifted_pair, double /*epsilon*/,
                             const Grid& grid, const std::vector<GridFunction>& test_set) {
  auto q = [&](const CVec& f) { return base_pair.lower.apply(f); };
  auto qt = [&](const CVec& f) { return base_pair.raise.apply(f); };
  auto Q = [&](const CVec& f) { return shifted_pair.lower.apply(f); };
  auto Qt = [&](const CVec& f) { return shifted_pair.raise.apply(f); };
  double worst = 0.0;
  for (const GridFunction& tf : test_set) {
    require_same_grid(tf.grid, grid, kModule);
    const CVec f = tf.values;
    const CVec Bf = Qt(q(f));
    const CVec lhs = Qt(Q(Bf));
    const CVec rhs = Qt(q(qt(q(f))));
    worst = std::max(worst, l2_norm(grid, lhs - rhs) / l2_norm(grid, f));
  }
  return worst;
}

int count_level(const SpectralResult& s, double level, double tol) {
  int c = 0;
  for (Eigen::Index i = 0; i < s.eigenvalues.size(); ++i)
    if (std::abs(s.eigenvalues[i] - level) < tol) ++c;
  return c;
}

SpectrumMatch spectrum_match(const SpectralResult& base, const SpectralResult& transformed, double epsilon,
                             double tol) {
  SpectrumMatch m;
  const Eigen::Index k = std::min(base.eigenvalues.size(), transformed.eigenvalues.size());
  for (Eigen::Index i = 1; i < k; ++i) {
    const double d = std::abs(base.eigenvalues[i] - transformed.eigenvalues[i]);
    m.abs_diff.push_back(d);
    m.max_diff = std::max(m.max_diff, d);
  }
  m.matched = m.max_diff < tol;
  m.epsilon_count = count_level(transformed, epsilon, tol);
  return m;
}

}  // namespace pdm
