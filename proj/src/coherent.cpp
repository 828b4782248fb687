#include "pdm/coherent.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace pdm {

namespace {

const char* kModule = "coherent";
const double kSqrt2 = std::sqrt(2.0);
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);
const cplx kI(0.0, 1.0);

void require_alpha(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw Error(ErrorKind::alpha_range, kModule, "alpha must lie in [0, 1] (got " + std::to_string(alpha) + ")");
  }
}

void require_imaginary(cplx z) {
  if (std::abs(z.real()) > 1e-14 * std::max(1.0, std::abs(z))) {
    std::ostringstream msg;
    msg << "z = " << z.real() << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag())
        << "i has a nonzero real part; the displacement operator is unitary only for z = -z*";
    throw Error(ErrorKind::nonzero_real_part, kModule, msg.str());
  }
}

struct Samples {
  RVec U, U1, U2, W, W1, intW;  // intW = int W/U dx from x_min
};

Samples sample(const MassProfile& p, const SuperpotentialFamily& Wfam, double alpha, const Grid& grid) {
  ClassificationReport rep = classify_profile(p, grid, 1);
  if (!rep.accepted) throw Error(ErrorKind::rejected_profile, kModule, rep.message);
  ProfileSamples s = eval_profile(p, grid);
  SuperpotentialSamples w = eval_superpotential(Wfam, p, alpha, grid);
  Samples out{s.U.real(), s.U1.real(), s.U2.real(), w.W.real(), w.W1.real(), RVec()};
  out.intW = cumulative_integral(grid, out.W.cwiseQuotient(out.U));
  return out;
}

// Complex exponent of the literal coherent state and its analytic x-derivative.
void literal_exponent(cplx z, double alpha, const Samples& s, CVec& E, CVec& E1) {
  const Eigen::Index n = s.U.size();
  E.resize(n);
  E1.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    E[i] = (alpha - 1.0) * std::log(s.U[i]) + kSqrt2 * z * s.W[i] + ((1.0 - 2.0 * alpha) * kInvSqrt2) * z * s.U1[i] -
           s.intW[i];
    E1[i] = (alpha - 1.0) * s.U1[i] / s.U[i] + kSqrt2 * z * (s.W1[i] + 0.5 * (1.0 - 2.0 * alpha) * s.U2[i]) -
            s.W[i] / s.U[i];
  }
}

// Shared normalizability test for U^(alpha-1) exp(-int W dmu); the displacement only adds a phase.
void require_normalizable(const MassProfile& p, const SuperpotentialFamily& Wfam, double alpha, const Grid& grid) {
  auto log_density = [&](const Grid& g) -> RVec {
    ProfileSamples s = eval_profile(p, g);
    SuperpotentialSamples w = eval_superpotential(Wfam, p, alpha, g);
    const RVec U = s.U.real();
    return 2.0 * ((alpha - 1.0) * U.array().log().matrix() - cumulative_integral(g, w.W.real().cwiseQuotient(U)));
  };
  const double ratio = doubling_ratio(grid, log_density);
  if (!(ratio < 1.01)) {
    throw Error(ErrorKind::non_normalizable, kModule,
                "coherent state is not square integrable (domain-doubling norm ratio " + std::to_string(ratio) + ")");
  }
}

CVec exp_shifted(const CVec& E) {
  double peak = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < E.size(); ++i) peak = std::max(peak, E[i].real());
  CVec out(E.size());
  for (Eigen::Index i = 0; i < E.size(); ++i) out[i] = std::exp(E[i] - peak);
  return out;
}

CoherentStateRecord finish_record(cplx z, double alpha, const Grid& grid, const Samples& s, const CVec& E,
                                  const CVec& E1, const MassProfile& p, const SuperpotentialFamily& Wfam) {
  CoherentStateRecord rec;
  rec.z = z;
  rec.alpha = alpha;
  GridFunction raw(grid, exp_shifted(E));
  rec.norm_before = l2_norm(raw);
  rec.psi = normalized(raw);
  const RVec c = (1.0 - alpha) * s.U1 + s.W;
  CVec r(grid.n);
  for (int i = 0; i < grid.n; ++i) r[i] = (kInvSqrt2 * (s.U[i] * E1[i] + c[i]) - z) * rec.psi.values[i];
  rec.eigen_residual = l2_norm(grid, r);
  LadderPair pair = build_Qalpha_pair(p, Wfam, alpha, grid);
  const CVec d = pair.lower.apply(rec.psi.values) - z * rec.psi.values;
  rec.discrete_residual = interior_norm(grid, d) / interior_norm(grid, rec.psi.values);
  return rec;
}

double aligned_distance(const GridFunction& a, const GridFunction& b) {
  cplx ov = inner_product(a, b);
  cplx phase = std::abs(ov) > 0 ? std::conj(ov) / std::abs(ov) : cplx(1.0);
  return l2_norm(a.grid, a.values - phase * b.values);
}

cplx expect(const GridFunction& psi, const RVec& f) {
  CVec dens = psi.values.cwiseAbs2().cast<cplx>();
  return integrate(GridFunction(psi.grid, dens.cwiseProduct(f.cast<cplx>())));
}

int sign_of(double v, double tol) { return v > tol ? 1 : (v < -tol ? -1 : 0); }

}  // namespace

std::string to_string(GurClass c) {
  switch (c) {
    case GurClass::saturated: return "saturated";
    case GurClass::minimized: return "minimized";
    case GurClass::violated_tolerance: return "violated-tolerance";
  }
  return "unknown";
}

std::string to_string(WSign s) {
  switch (s) {
    case WSign::positive: return "positive";
    case WSign::negative: return "negative";
    case WSign::indeterminate: return "indeterminate";
    case WSign::unconstrained: return "unconstrained";
  }
  return "unknown";
}

GridFunction cs_ground_state(const MassProfile& p, const SuperpotentialFamily& Wfam, double alpha, const Grid& grid) {
  return cs_construct(cplx(0.0), alpha, p, Wfam, grid).psi;
}

CoherentStateRecord cs_construct(cplx z, double alpha, const MassProfile& p, const SuperpotentialFamily& Wfam,
                                 const Grid& grid) {
  require_alpha(alpha);
  require_imaginary(z);
  Samples s = sample(p, Wfam, alpha, grid);
  require_normalizable(p, Wfam, alpha, grid);
  CVec E, E1;
  literal_exponent(z, alpha, s, E, E1);
  return finish_record(z, alpha, grid, s, E, E1, p, Wfam);
}

CoherentStateRecord cs_exact_eigenfunction(cplx z, double alpha, const MassProfile& p,
                                           const SuperpotentialFamily& Wfam, const Grid& grid) {
  require_alpha(alpha);
  require_imaginary(z);
  Samples s = sample(p, Wfam, alpha, grid);
  require_normalizable(p, Wfam, alpha, grid);
  const RVec mu = auxiliary_mu(p, grid).real();
  CVec E(grid.n), E1(grid.n);
  for (int i = 0; i < grid.n; ++i) {
    E[i] = (alpha - 1.0) * std::log(s.U[i]) + kSqrt2 * z * mu[i] - s.intW[i];
    E1[i] = (alpha - 1.0) * s.U1[i] / s.U[i] + kSqrt2 * z / s.U[i] - s.W[i] / s.U[i];
  }
  return finish_record(z, alpha, grid, s, E, E1, p, Wfam);
}

MirroredState cs_mirrored(cplx z, double alpha, const MassProfile& p, const SuperpotentialFamily& Wfam,
                          const Grid& grid) {
  require_alpha(alpha);
  MirroredState out;
  out.state = cs_construct(z, 1.0 - alpha, p, Wfam, grid);

  Samples sa = sample(p, Wfam, alpha, grid);
  Samples sb = sample(p, Wfam, 1.0 - alpha, grid);
  CVec E, E1;
  literal_exponent(z, alpha, sa, E, E1);
  const RVec Wt = sa.W - sb.W;
  const RVec intWt = sa.intW - sb.intW;
  CVec logF(grid.n);
  for (int i = 0; i < grid.n; ++i) {
    logF[i] = (1.0 - 2.0 * alpha) * std::log(sa.U[i]) - kSqrt2 * z * Wt[i] -
              kSqrt2 * (1.0 - 2.0 * alpha) * z * sa.U1[i] + intWt[i];
  }
  out.via_factor = normalized(GridFunction(grid, exp_shifted(E + logF)));
  out.factor_check = aligned_distance(out.state.psi, out.via_factor);
  const RVec re = logF.real();
  out.factor_spread = std::expm1(re.maxCoeff() - re.minCoeff());
  return out;
}

DisplacementReport displacement_conjugation_check(cplx z, const LadderPair& pair, const GridFunction& commutator,
                                                  const Grid& grid) {
  require_imaginary(z);
  if (grid.n > kMaxDenseNodes) {
    throw Error(ErrorKind::invalid_argument, kModule,
                "dense displacement check needs n <= " + std::to_string(kMaxDenseNodes) + " (got " +
                    std::to_string(grid.n) + ")");
  }
  if (std::abs(z) > kMaxDisplacement) {
    throw Error(ErrorKind::overflow, kModule,
                "|z| = " + std::to_string(std::abs(z)) + " exceeds the supported bound " +
                    std::to_string(kMaxDisplacement) + " for the dense exponential");
  }
  require_same_grid(pair.lower.grid(), grid, kModule);
  const Eigen::MatrixXcd Q = pair.lower.dense();
  const Eigen::MatrixXcd Qt = pair.raise.dense();
  const Eigen::MatrixXd K = (Q + Qt).real();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(K);
  if (es.info() != Eigen::Success) throw Error(ErrorKind::eig_failure, kModule, "dense eigendecomposition failed");
  const Eigen::MatrixXcd V = es.eigenvectors().cast<cplx>();
  CVec ph(grid.n);
  for (int i = 0; i < grid.n; ++i) ph[i] = std::exp(z * es.eigenvalues()[i]);
  const Eigen::MatrixXcd D = V * ph.asDiagonal() * V.transpose();
  const Eigen::MatrixXcd Dd = D.adjoint();
  const Eigen::MatrixXcd C = Q * Qt - Qt * Q;
  const Eigen::MatrixXcd A = Dd * Q * D - Q - z * C;
  const Eigen::MatrixXcd B = Dd * Qt * D - Qt - std::conj(z) * C;

  const CVec G = commutator.values;
  auto S = [&](const CVec& f) -> CVec { return (-kI * z) * (pair.lower.apply(f) + pair.raise.apply(f)); };

  DisplacementReport rep;
  for (const GridFunction& tf : gaussian_test_set(grid)) {
    const CVec& f = tf.values;
    const double fn = interior_norm(grid, f);
    rep.res_lower = std::max(rep.res_lower, interior_norm(grid, A * f) / fn);
    rep.res_raise = std::max(rep.res_raise, interior_norm(grid, B * f) / fn);
    const CVec Gf = G.cwiseProduct(f);
    const CVec cl = S(pair.lower.apply(f)) - pair.lower.apply(S(f)) - (kI * z) * Gf;
    const CVec cr = S(pair.raise.apply(f)) - pair.raise.apply(S(f)) + (kI * z) * Gf;
    rep.prop_lower = std::max(rep.prop_lower, interior_norm(grid, cl) / fn);
    rep.prop_raise = std::max(rep.prop_raise, interior_norm(grid, cr) / fn);
  }
  const RVec g = G.real();
  const double spread = g.maxCoeff() - g.minCoeff();
  rep.central = spread <= 1e-10 * std::max(1.0, g.cwiseAbs().maxCoeff());
  return rep;
}

Observables observables(const MassProfile& p, const SuperpotentialFamily& Wfam, double alpha, const Grid& grid) {
  require_alpha(alpha);
  LadderPair pair = build_Qalpha_pair(p, Wfam, alpha, grid);
  ProfileSamples s = eval_profile(p, grid);
  const RVec shift = ((1.0 - 2.0 * alpha) * kInvSqrt2) * s.U1.real();
  Observables ob;
  ob.W_hat = (pair.lower + pair.raise) * cplx(kInvSqrt2) - LinearDifferentialOperator::diagonal(grid, shift);
  ob.Pi_hat = (pair.lower - pair.raise) * (-kI * kInvSqrt2);
  return ob;
}

ExpectationReport expectations(const CoherentStateRecord& state, const MassProfile& p,
                               const SuperpotentialFamily& Wfam, const Grid& grid) {
  require_same_grid(state.psi.grid, grid, kModule);
  const double alpha = state.alpha;
  const cplx z = state.z;
  Observables ob = observables(p, Wfam, alpha, grid);
  const GridFunction& psi = state.psi;
  const GridFunction Wpsi(grid, ob.W_hat.apply(psi.values));
  const GridFunction Ppsi(grid, ob.Pi_hat.apply(psi.values));

  ExpectationReport r;
  r.W = inner_product(psi, Wpsi);
  r.Pi = inner_product(psi, Ppsi);
  r.W2 = inner_product(Wpsi, Wpsi);
  r.Pi2 = inner_product(Ppsi, Ppsi);

  Samples s = sample(p, Wfam, alpha, grid);
  const double k = 1.0 - 2.0 * alpha;
  const RVec w_rhs = (-0.5 * k) * s.U1;
  const RVec w2_rhs = (-0.5 * s.U.cwiseProduct(s.W1) - k * s.U1.cwiseProduct(s.W) +
                       (0.5 * k) * s.U.cwiseProduct(s.U2) - (0.25 * k * k) * s.U1.cwiseAbs2());
  const RVec pi2_rhs = 0.5 * s.U.cwiseProduct(s.W1) + (0.25 * k) * s.U.cwiseProduct(s.U2);
  r.W_rhs = GridFunction::from_real(grid, w_rhs);
  r.W2_rhs = GridFunction::from_real(grid, w2_rhs);
  r.Pi2_rhs = GridFunction::from_real(grid, pi2_rhs);
  r.W_closed = expect(psi, w_rhs);
  r.Pi_closed = -kI * kSqrt2 * z;
  r.W2_closed = expect(psi, w2_rhs);
  r.Pi2_closed = -2.0 * z * z + expect(psi, pi2_rhs);
  return r;
}

SignVerdict minimization_and_sign(const MassProfile& p, const SuperpotentialFamily& Wfam, double alpha,
                                  const Grid& grid) {
  require_alpha(alpha);
  SignVerdict v;
  if (alpha == 0.5) {
    v.sign = WSign::unconstrained;
    v.summary = "saturated; sign unconstrained";
    return v;
  }
  Samples s = sample(p, Wfam, alpha, grid);
  const RVec drive = (1.0 - 2.0 * alpha) * s.U1;
  const RVec inner = s.W + 0.5 * drive;
  const double tol = 1e-12 * std::max(1.0, drive.cwiseAbs().maxCoeff());
  int current = 0;
  for (int i = 0; i < grid.n; ++i) {
    const int sg = sign_of(drive[i], tol);
    if (sg == 0) {
      current = 0;
      continue;
    }
    if (sg != current) {
      SignRegion r;
      r.x_begin = grid.x(i);
      r.sign_of_driver = sg;
      r.required_sign = -sg;
      r.satisfied = true;
      v.regions.push_back(r);
      current = sg;
    }
    SignRegion& r = v.regions.back();
    r.x_end = grid.x(i);
    if (sign_of(inner[i], 0.0) != r.required_sign) r.satisfied = false;
  }
  bool any_pos = false, any_neg = false;
  for (const SignRegion& r : v.regions) {
    if (r.required_sign > 0) any_pos = true;
    if (r.required_sign < 0) any_neg = true;
  }
  std::ostringstream msg;
  if (any_pos && !any_neg) {
    v.sign = WSign::positive;
    msg << "(1-2 alpha) U' < 0 on the box: case C1, W must be positive";
  } else if (any_neg && !any_pos) {
    v.sign = WSign::negative;
    msg << "(1-2 alpha) U' > 0 on the box: case C2, W must be negative";
  } else if (v.regions.empty()) {
    v.sign = WSign::indeterminate;
    msg << "U' vanishes on the box, no sign constraint";
  } else {
    v.sign = WSign::indeterminate;
    msg << "(1-2 alpha) U' changes sign across the box (" << v.regions.size() << " regions)";
  }
  v.summary = msg.str();
  return v;
}

GurReport gur_product(const CoherentStateRecord& state, const MassProfile& p, const SuperpotentialFamily& Wfam,
                      double alpha, const Grid& grid) {
  ExpectationReport e = expectations(state, p, Wfam, grid);
  GurReport g;
  g.var_W = std::max(0.0, e.W2.real() - std::norm(e.W));
  g.var_Pi = std::max(0.0, e.Pi2.real() - std::norm(e.Pi));
  g.product = g.var_W * g.var_Pi;

  Samples s = sample(p, Wfam, alpha, grid);
  const RVec G = commutator_gdoa(p, Wfam, alpha, grid).real();
  const double k = 1.0 - 2.0 * alpha;
  const RVec R = (k * s.U1).cwiseProduct(s.W + (0.5 * k) * s.U1);
  g.R_alpha_values = GridFunction::from_real(grid, R);
  g.commutator_expect = expect(state.psi, G).real();
  g.R_expect = expect(state.psi, R).real();
  g.bound = 0.25 * g.commutator_expect * g.commutator_expect;
  g.rhs_identity = g.bound - 0.5 * g.R_expect * g.commutator_expect;

  const double scale = std::max(1.0, std::abs(g.commutator_expect));
  if (std::abs(g.R_expect) < 1e-8 * scale) {
    g.classification = GurClass::saturated;
  } else if (g.R_expect < 0.0 && g.product >= g.bound - 1e-6 * std::max(1.0, g.bound)) {
    g.classification = GurClass::minimized;
  } else {
    g.classification = GurClass::violated_tolerance;
  }
  g.sign_of_W = minimization_and_sign(p, Wfam, alpha, grid).sign;
  return g;
}

}  // namespace pdm
