#include "pdm/ladder.hpp"

#include <algorithm>
#include <cmath>

namespace pdm {

namespace {

const char* kModule = "ladder";
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

RVec midpoint_average(const RVec& v) { return 0.5 * (v.head(v.size() - 1) + v.tail(v.size() - 1)); }

void require_accepted(const MassProfile& p, const Grid& grid) {
  ClassificationReport rep = classify_profile(p, grid, 1);
  if (!rep.accepted) throw Error(ErrorKind::rejected_profile, kModule, rep.message);
}

void require_alpha(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw Error(ErrorKind::alpha_range, kModule, "alpha must lie in [0, 1] (got " + std::to_string(alpha) + ")");
  }
}

}  // namespace

CVec StaggeredFactor::apply(const CVec& f) const {
  const int m = static_cast<int>(u_mid.size());
  CVec out(m);
  for (int j = 0; j < m; ++j) {
    const double r = std::exp(0.5 * log_ratio[j]);
    const cplx left = (j == 0) ? cplx(0.0) : f[j];
    const cplx right = (j + 1 == m) ? cplx(0.0) : f[j + 1];
    out[j] = kInvSqrt2 * (u_mid[j] / grid.h) * (right / r - r * left);
  }
  return out;
}

CVec StaggeredFactor::apply_transpose(const CVec& g) const {
  const int m = static_cast<int>(u_mid.size());
  CVec out = CVec::Zero(m + 1);
  for (int j = 0; j < m; ++j) {
    const double r = std::exp(0.5 * log_ratio[j]);
    const double s = kInvSqrt2 * u_mid[j] / grid.h;
    if (j > 0) out[j] += -s * r * g[j];
    if (j + 1 < m) out[j + 1] += s / r * g[j];
  }
  return out;
}

LadderPair make_ladder_pair(const Grid& grid, const RVec& U, const RVec& c, const RVec& u_mid, double alpha) {
  require_alpha(alpha);
  LinearDifferentialOperator D = central_d1(grid);
  LinearDifferentialOperator lower(grid, 2);
  for (int i = 0; i < grid.n; ++i) {
    for (int j = std::max(0, i - 2); j <= std::min(grid.n - 1, i + 2); ++j) {
      cplx v = U[i] * D.entry(i, j);
      if (i == j) v += c[i];
      lower.set(i, j, kInvSqrt2 * v);
    }
  }
  LadderPair pair;
  pair.lower = lower;
  pair.raise = lower.transpose();
  pair.alpha = alpha;
  pair.U = GridFunction::from_real(grid, U);
  pair.c = GridFunction::from_real(grid, c);

  // log ratios of the staggered factor
  const double h = grid.h;
  const RVec s = c.cwiseQuotient(U);
  const RVec I = cumulative_integral(grid, s);
  const int m = grid.n - 1;
  RVec sb(m);
  for (int j = 0; j < m; ++j) sb[j] = (I[j + 1] - I[j]) / h;
  const RVec a = U.cwiseProduct(U);
  const RVec sp = midpoint_average(differentiate(grid, s, 1));
  const RVec a1 = midpoint_average(differentiate(grid, a, 1));
  const RVec a2 = midpoint_average(differentiate(grid, a, 2));
  RVec lr(m);
  for (int j = 0; j < m; ++j) {
    const double am = u_mid[j] * u_mid[j];
    const double t = -am * sb[j] * sb[j] * sb[j] / 24.0 + 3.0 / 16.0 * am * sb[j] * sp[j] +
                     a1[j] * sb[j] * sb[j] / 16.0 - sb[j] * a2[j] / 16.0;
    lr[j] = -h * sb[j] - h * h * h * t / am;
  }
  pair.factor = StaggeredFactor{grid, u_mid, lr};
  return pair;
}

LadderPair build_pair_from_samples(const MassProfile& p, const GridFunction& W, double alpha, const Grid& grid,
                                   std::optional<double> lambda_param) {
  require_alpha(alpha);
  require_accepted(p, grid);
  require_same_grid(W.grid, grid, kModule);
  ProfileSamples s = eval_profile(p, grid);
  ProfileSamples sm = eval_profile(p, midpoint_grid(grid));
  const RVec c = (1.0 - alpha) * s.U1.real() + W.real();
  LadderPair pair = make_ladder_pair(grid, s.U.real(), c, sm.U.real(), alpha);
  pair.lambda_param = lambda_param;
  return pair;
}

LadderPair build_Qalpha_pair(const MassProfile& p, const SuperpotentialFamily& Wfam, double alpha, const Grid& grid) {
  require_alpha(alpha);
  require_accepted(p, grid);
  SuperpotentialSamples w = eval_superpotential(Wfam, p, alpha, grid);
  return build_pair_from_samples(p, w.W, alpha, grid);
}

LadderPair build_q_pair(const MassProfile& p, const SuperpotentialFamily& w, const OrderingParams& ord,
                        const Grid& grid) {
  return build_Qalpha_pair(p, w, ord.alpha, grid);
}

GridFunction ground_state_xi0(const MassProfile& p, const SuperpotentialFamily& w, const OrderingParams& ord,
                              const Grid& grid) {
  require_accepted(p, grid);
  auto log_density = [&](const Grid& g) -> RVec {
    ProfileSamples s = eval_profile(p, g);
    SuperpotentialSamples ws = eval_superpotential(w, p, ord.alpha, g);
    const RVec U = s.U.real();
    const RVec expo = (-1.0 - 2.0 * ord.a) * U.array().log().matrix() -
                      cumulative_integral(g, ws.W.real().cwiseQuotient(U));
    return 2.0 * expo;
  };
  const double ratio = doubling_ratio(grid, log_density);
  if (!(ratio < 1.01)) {
    throw Error(ErrorKind::non_normalizable, kModule,
                "ground state is not square integrable (domain-doubling norm ratio " + std::to_string(ratio) + ")");
  }
  RVec ld = log_density(grid);
  const double peak = ld.maxCoeff();
  RVec xi = (0.5 * (ld.array() - peak)).exp().matrix();
  return normalized(GridFunction::from_real(grid, xi));
}

RiccatiShift riccati_shift(const GridFunction& w, double lambda_param, const GridFunction& xi0, const GridFunction& U) {
  const Grid& g = xi0.grid;
  const RVec dens = xi0.values.cwiseAbs2();
  const RVec run = cumulative_integral(g, dens);
  RVec den = (lambda_param + run.array()).matrix();
  bool has_pos = false, has_neg = false;
  int first_bad = -1;
  for (int i = 0; i < g.n; ++i) {
    if (den[i] > 0) has_pos = true;
    if (den[i] < 0) has_neg = true;
    if (den[i] == 0.0 && first_bad < 0) first_bad = i;
  }
  if ((has_pos && has_neg) || first_bad >= 0) {
    int idx = first_bad;
    for (int i = 1; i < g.n && idx < 0; ++i)
      if ((den[i - 1] > 0) != (den[i] > 0)) idx = i;
    throw Error(ErrorKind::pole, kModule,
                "lambda = " + std::to_string(lambda_param) + " puts a pole of phi inside the box near x = " +
                    std::to_string(g.x(std::max(idx, 0))));
  }
  RVec phi = U.real().cwiseProduct(dens).cwiseQuotient(den);
  RiccatiShift out;
  out.phi = GridFunction::from_real(g, phi);
  out.W = GridFunction::from_real(g, w.real() + phi);
  out.denominator = GridFunction::from_real(g, den);
  return out;
}

GridFunction build_W(const SuperpotentialFamily& w, double lambda_param, const GridFunction& xi0, const MassProfile& p,
                     const Grid& grid, double alpha) {
  require_same_grid(xi0.grid, grid, kModule);
  SuperpotentialSamples ws = eval_superpotential(w, p, alpha, grid);
  ProfileSamples s = eval_profile(p, grid);
  return riccati_shift(ws.W, lambda_param, xi0, s.U).W;
}

GridFunction commutator_gdoa(const MassProfile& p, const SuperpotentialFamily& Wfam, double alpha, const Grid& grid) {
  require_alpha(alpha);
  require_accepted(p, grid);
  ProfileSamples s = eval_profile(p, grid);
  SuperpotentialSamples w = eval_superpotential(Wfam, p, alpha, grid);
  const RVec U = s.U.real();
  RVec G = U.cwiseProduct(w.W1.real()) + 0.5 * (1.0 - 2.0 * alpha) * U.cwiseProduct(s.U2.real());
  return GridFunction::from_real(grid, G);
}

std::vector<GridFunction> gaussian_test_set(const Grid& grid) {
  const double L = grid.x_max - grid.x_min;
  const double lo = grid.x_min + 0.25 * L;
  const double hi = grid.x_max - 0.25 * L;
  const RVec x = grid.nodes();
  std::vector<GridFunction> out;
  for (int k = 0; k < 5; ++k) {
    const double c = lo + (hi - lo) * k / 4.0;
    RVec f = (-(x.array() - c).square()).exp().matrix();
    out.push_back(GridFunction::from_real(grid, f));
  }
  return out;
}

double interior_norm(const Grid& g, const CVec& f) {
  const int len = g.n - 2 * kInteriorMargin;
  if (len <= 0) return l2_norm(g, f);
  return std::sqrt(g.h) * f.segment(kInteriorMargin, len).norm();
}

GdoaReport gdoa_residuals(const MassProfile& p, const SuperpotentialFamily& Wfam, double alpha, const Grid& grid) {
  GdoaReport rep;
  rep.commutator = commutator_gdoa(p, Wfam, alpha, grid);
  LadderPair pair = build_Qalpha_pair(p, Wfam, alpha, grid);
  const CVec G = rep.commutator.values;
  auto Q = [&](const CVec& f) { return pair.lower.apply(f); };
  auto Qt = [&](const CVec& f) { return pair.raise.apply(f); };
  auto H = [&](const CVec& f) { return Qt(Q(f)); };
  for (const GridFunction& tf : gaussian_test_set(grid)) {
    const CVec f = tf.values;
    const double fn = interior_norm(grid, f);

    const CVec comm = Q(Qt(f)) - Qt(Q(f));
    const CVec Gf = G.cwiseProduct(f);
    rep.identity_residual =
        std::max(rep.identity_residual, interior_norm(grid, comm - Gf) / std::max(interior_norm(grid, Gf), fn));

    const CVec Qf = Q(f);
    const CVec rhs_b = -G.cwiseProduct(Qf);
    const CVec lhs_b = H(Qf) - Q(H(f));
    rep.hq_residual =
        std::max(rep.hq_residual, interior_norm(grid, lhs_b - rhs_b) / std::max(interior_norm(grid, rhs_b), fn));

    const CVec rhs_c = Qt(Gf);
    const CVec lhs_c = H(Qt(f)) - Qt(H(f));
    rep.hqt_residual =
        std::max(rep.hqt_residual, interior_norm(grid, lhs_c - rhs_c) / std::max(interior_norm(grid, rhs_c), fn));
  }
  return rep;
}

double adjoint_residual(const LadderPair& pair, const GridFunction& f, const GridFunction& g) {
  return std::abs(inner_product(pair.lower.apply(f), g) - inner_product(f, pair.raise.apply(g)));
}

}  // namespace pdm
