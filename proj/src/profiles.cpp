#include "pdm/profiles.hpp"

#include <unsupported/Eigen/Splines>

#include <algorithm>
#include <cmath>
#include <limits>

namespace pdm {

namespace {

const char* kModule = "profiles";

double param(const MassProfile& p, size_t i, double fallback) {
  return i < p.params.size() ? p.params[i] : fallback;
}

// Raw samples of m and U without positivity checks, used by both evaluation and classification.
struct RawProfile {
  RVec m, U, U1, U2;
};

RVec spline_table(const MassProfile& p, const RVec& x) {
  const Eigen::Index nt = static_cast<Eigen::Index>(p.table_x.size());
  const double lo = p.table_x.front(), hi = p.table_x.back();
  RVec out(x.size());
  if (nt == 1) {
    out.setConstant(p.table_m.front());
    return out;
  }
  using Spline1 = Eigen::Spline<double, 1>;
  Eigen::RowVectorXd knots(nt), vals(nt);
  for (Eigen::Index i = 0; i < nt; ++i) {
    knots[i] = (p.table_x[i] - lo) / (hi - lo);
    vals[i] = p.table_m[i];
  }
  const Eigen::DenseIndex degree = std::min<Eigen::DenseIndex>(3, nt - 1);
  Spline1 s = Eigen::SplineFitting<Spline1>::Interpolate(vals, degree, knots);
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    double t = std::clamp((x[i] - lo) / (hi - lo), 0.0, 1.0);
    out[i] = s(t)(0);
  }
  return out;
}

RawProfile raw_profile(const MassProfile& p, const Grid& grid) {
  const RVec x = grid.nodes();
  const Eigen::Index n = x.size();
  RawProfile r;
  r.m.resize(n);
  r.U.resize(n);
  r.U1.resize(n);
  r.U2.resize(n);
  switch (p.family) {
    case ProfileFamily::constant: {
      const double m0 = param(p, 0, 1.0);
      r.m.setConstant(m0);
      r.U.setConstant(m0 > 0 ? 1.0 / std::sqrt(m0) : std::numeric_limits<double>::infinity());
      r.U1.setZero();
      r.U2.setZero();
      break;
    }
    case ProfileFamily::rational: {
      const double a0 = param(p, 0, 2.0);
      for (Eigen::Index i = 0; i < n; ++i) {
        const double x2 = x[i] * x[i];
        const double d = a0 + x2;
        r.U[i] = (1.0 + x2) / d;
        r.m[i] = 1.0 / (r.U[i] * r.U[i]);
        r.U1[i] = 2.0 * x[i] * (a0 - 1.0) / (d * d);
        r.U2[i] = 2.0 * (a0 - 1.0) * (a0 - 3.0 * x2) / (d * d * d);
      }
      break;
    }
    case ProfileFamily::inverse_quadratic: {
      for (Eigen::Index i = 0; i < n; ++i) {
        r.U[i] = 1.0 + x[i] * x[i];
        r.m[i] = 1.0 / (r.U[i] * r.U[i]);
        r.U1[i] = 2.0 * x[i];
        r.U2[i] = 2.0;
      }
      break;
    }
    case ProfileFamily::power: {
      const double pw = param(p, 0, 1.0);
      for (Eigen::Index i = 0; i < n; ++i) {
        const double ax = std::abs(x[i]);
        const double sg = x[i] > 0 ? 1.0 : (x[i] < 0 ? -1.0 : 0.0);
        r.U[i] = std::pow(ax, pw);
        r.m[i] = r.U[i] > 0 ? std::pow(ax, -2.0 * pw) : std::numeric_limits<double>::infinity();
        r.U1[i] = pw == 0.0 ? 0.0 : pw * sg * std::pow(ax, pw - 1.0);
        r.U2[i] = (pw == 0.0 || pw == 1.0) ? 0.0 : pw * (pw - 1.0) * std::pow(ax, pw - 2.0);
      }
      break;
    }
    case ProfileFamily::tabulated: {
      r.m = spline_table(p, x);
      for (Eigen::Index i = 0; i < n; ++i)
        r.U[i] = r.m[i] > 0 ? 1.0 / std::sqrt(r.m[i]) : std::numeric_limits<double>::infinity();
      if (r.U.allFinite()) {
        r.U1 = differentiate(grid, r.U, 1);
        r.U2 = differentiate(grid, r.U, 2);
      } else {
        r.U1.setConstant(std::numeric_limits<double>::quiet_NaN());
        r.U2.setConstant(std::numeric_limits<double>::quiet_NaN());
      }
      break;
    }
  }
  return r;
}

void validate_params(const MassProfile& p) {
  switch (p.family) {
    case ProfileFamily::constant:
      if (!(param(p, 0, 1.0) > 0.0)) throw Error(ErrorKind::nonpositive_mass, kModule, "constant mass must be positive");
      break;
    case ProfileFamily::rational:
      if (!(param(p, 0, 2.0) > 0.0)) throw Error(ErrorKind::invalid_argument, kModule, "rational profile needs a0 > 0");
      break;
    case ProfileFamily::tabulated: {
      if (p.table_x.empty() || p.table_x.size() != p.table_m.size()) {
        throw Error(ErrorKind::invalid_argument, kModule, "tabulated profile needs equally long, nonempty x and m columns");
      }
      for (size_t i = 1; i < p.table_x.size(); ++i)
        if (!(p.table_x[i] > p.table_x[i - 1]))
          throw Error(ErrorKind::invalid_argument, kModule, "tabulated x column must be strictly increasing");
      break;
    }
    default:
      break;
  }
}

}  // namespace

std::string to_string(ProfileFamily f) {
  switch (f) {
    case ProfileFamily::constant: return "constant";
    case ProfileFamily::rational: return "rational";
    case ProfileFamily::inverse_quadratic: return "inverse_quadratic";
    case ProfileFamily::power: return "power";
    case ProfileFamily::tabulated: return "tabulated";
  }
  return "unknown";
}

ProfileFamily profile_family_from_string(const std::string& s) {
  if (s == "constant") return ProfileFamily::constant;
  if (s == "rational") return ProfileFamily::rational;
  if (s == "inverse_quadratic") return ProfileFamily::inverse_quadratic;
  if (s == "power") return ProfileFamily::power;
  if (s == "tabulated") return ProfileFamily::tabulated;
  throw Error(ErrorKind::invalid_argument, kModule, "unknown profile family '" + s + "'");
}

MassProfile constant_profile(double m0) { return MassProfile{ProfileFamily::constant, {m0}, {}, {}}; }
MassProfile rational_profile(double a0) { return MassProfile{ProfileFamily::rational, {a0}, {}, {}}; }
MassProfile inverse_quadratic_profile() { return MassProfile{ProfileFamily::inverse_quadratic, {}, {}, {}}; }
MassProfile power_profile(double p) { return MassProfile{ProfileFamily::power, {p}, {}, {}}; }
MassProfile tabulated_profile(std::vector<double> xs, std::vector<double> ms) {
  return MassProfile{ProfileFamily::tabulated, {}, std::move(xs), std::move(ms)};
}

ProfileSamples eval_profile(const MassProfile& p, const Grid& grid) {
  validate_params(p);
  RawProfile r = raw_profile(p, grid);
  for (Eigen::Index i = 0; i < r.m.size(); ++i) {
    if (!(r.m[i] > 0.0)) {
      throw Error(ErrorKind::nonpositive_mass, kModule,
                  "mass is not positive at node " + std::to_string(i) + " (x = " + std::to_string(grid.x(int(i))) +
                      ", m = " + std::to_string(r.m[i]) + ")");
    }
    if (!std::isfinite(r.m[i]) || !(r.U[i] > 0.0)) {
      throw Error(ErrorKind::invalid_argument, kModule,
                  "mass is singular (U = 0) at node " + std::to_string(i) + " (x = " +
                      std::to_string(grid.x(int(i))) + "); choose a box that excludes the zero of U");
    }
  }
  if (!r.U1.allFinite() || !r.U2.allFinite()) {
    throw Error(ErrorKind::invalid_argument, kModule, "profile derivatives are not finite on this grid");
  }
  return ProfileSamples{GridFunction::from_real(grid, r.m), GridFunction::from_real(grid, r.U),
                        GridFunction::from_real(grid, r.U1), GridFunction::from_real(grid, r.U2)};
}

std::optional<RVec> analytic_mu(const MassProfile& p, const RVec& x) {
  RVec mu(x.size());
  switch (p.family) {
    case ProfileFamily::constant:
      mu = x * std::sqrt(param(p, 0, 1.0));
      return mu;
    case ProfileFamily::rational: {
      const double a0 = param(p, 0, 2.0);
      if (a0 == 1.0) return RVec(x);
      if (a0 > 0) {
        // 1/U = 1 + (a0 - 1)/(1 + x^2)
        for (Eigen::Index i = 0; i < x.size(); ++i) mu[i] = x[i] + (a0 - 1.0) * std::atan(x[i]);
        return mu;
      }
      return std::nullopt;
    }
    case ProfileFamily::inverse_quadratic:
      for (Eigen::Index i = 0; i < x.size(); ++i) mu[i] = std::atan(x[i]);
      return mu;
    default:
      return std::nullopt;
  }
}

GridFunction auxiliary_mu(const MassProfile& p, const Grid& grid) {
  ProfileSamples s = eval_profile(p, grid);
  RVec inv = s.U.real().cwiseInverse();
  return GridFunction::from_real(grid, cumulative_integral(grid, inv));
}

OrderingParams make_ordering(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw Error(ErrorKind::alpha_range, kModule, "ordering parameter alpha must lie in [0, 1] (got " +
                                                     std::to_string(alpha) + ")");
  }
  OrderingParams o;
  o.alpha = alpha;
  o.a = -alpha / 2.0;
  o.b = (alpha - 1.0) / 2.0;
  return o;
}

std::string to_string(ProfileCase c) {
  switch (c) {
    case ProfileCase::regular: return "regular";
    case ProfileCase::p2_zeros: return "P2";
    case ProfileCase::p1_singular: return "P1";
  }
  return "unknown";
}

ClassificationReport classify_profile(const MassProfile& p, const Grid& grid, int n_index) {
  ClassificationReport rep;
  const int nidx = std::max(1, n_index);
  rep.alpha_min = 0.0;
  rep.alpha_max = 1.0 / nidx;
  validate_params(p);
  RawProfile r = raw_profile(p, grid);
  double umax = 0.0;
  for (Eigen::Index i = 0; i < r.U.size(); ++i)
    if (std::isfinite(r.U[i])) umax = std::max(umax, std::abs(r.U[i]));
  for (Eigen::Index i = 0; i < r.U.size(); ++i) {
    const bool m_bad = !(r.m[i] > 0.0) || std::isnan(r.m[i]) || !std::isfinite(r.U[i]);
    if (m_bad && !(std::isinf(r.m[i]) && r.m[i] > 0)) {
      rep.singular_nodes.push_back(int(i));
    } else if (std::isinf(r.m[i]) || r.U[i] <= 1e-10 * std::max(umax, 1e-300)) {
      rep.zero_nodes.push_back(int(i));
    }
  }
  if (!rep.singular_nodes.empty()) {
    rep.profile_case = ProfileCase::p1_singular;
    rep.accepted = false;
    rep.message = "U is singular (m has zeros) at " + std::to_string(rep.singular_nodes.size()) +
                  " node(s); case P1 is rejected";
  } else if (!rep.zero_nodes.empty()) {
    rep.profile_case = ProfileCase::p2_zeros;
    rep.accepted = true;
    rep.message = "U has zeros (m singular) at " + std::to_string(rep.zero_nodes.size()) +
                  " node(s); case P2 accepted with 0 <= alpha <= 1/" + std::to_string(nidx);
  } else {
    rep.profile_case = ProfileCase::regular;
    rep.accepted = true;
    rep.message = "U is positive and finite on the grid; accepted with 0 <= alpha <= 1/" + std::to_string(nidx);
  }
  return rep;
}

AlphaMembership alpha_set_membership(double alpha, int n_max) {
  const int nm = std::max(1, n_max);
  AlphaMembership out;
  double best = std::abs(alpha);
  out.nearest = 0.0;
  out.nearest_index = 0;
  // walk from small elements to large so that ties resolve toward the larger element
  for (int k = nm; k >= 1; --k) {
    const double s = 1.0 / k;
    const double d = std::abs(alpha - s);
    if (d <= best) {
      best = d;
      out.nearest = s;
      out.nearest_index = k;
    }
  }
  out.member = best <= 1e-12;
  return out;
}

// ---------------------------------------------------------------------------

std::string to_string(SuperpotentialKind k) {
  switch (k) {
    case SuperpotentialKind::alpha_independent: return "alpha_independent";
    case SuperpotentialKind::closed_form_in_alpha: return "closed_form_in_alpha";
    case SuperpotentialKind::saturating: return "saturating";
  }
  return "unknown";
}

std::string to_string(SuperpotentialBase b) {
  switch (b) {
    case SuperpotentialBase::zero: return "zero";
    case SuperpotentialBase::linear_x: return "linear_x";
    case SuperpotentialBase::linear_mu: return "linear_mu";
    case SuperpotentialBase::x_times_U: return "x_times_U";
  }
  return "unknown";
}

SuperpotentialKind superpotential_kind_from_string(const std::string& s) {
  if (s == "alpha_independent") return SuperpotentialKind::alpha_independent;
  if (s == "closed_form_in_alpha") return SuperpotentialKind::closed_form_in_alpha;
  if (s == "saturating") return SuperpotentialKind::saturating;
  throw Error(ErrorKind::invalid_argument, kModule, "unknown superpotential kind '" + s + "'");
}

SuperpotentialBase superpotential_base_from_string(const std::string& s) {
  if (s == "zero") return SuperpotentialBase::zero;
  if (s == "linear_x") return SuperpotentialBase::linear_x;
  if (s == "linear_mu") return SuperpotentialBase::linear_mu;
  if (s == "x_times_U") return SuperpotentialBase::x_times_U;
  throw Error(ErrorKind::invalid_argument, kModule, "unknown superpotential base '" + s + "'");
}

SuperpotentialSamples eval_superpotential(const SuperpotentialFamily& w, const MassProfile& p, double alpha,
                                          const Grid& grid) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw Error(ErrorKind::alpha_range, kModule, "alpha must lie in [0, 1] (got " + std::to_string(alpha) + ")");
  }
  ProfileSamples s = eval_profile(p, grid);
  const RVec x = grid.nodes();
  const RVec U = s.U.real(), U1 = s.U1.real(), U2 = s.U2.real();
  RVec base = RVec::Zero(grid.n), base1 = RVec::Zero(grid.n);
  switch (w.base) {
    case SuperpotentialBase::zero:
      break;
    case SuperpotentialBase::linear_x:
      base = w.omega * (x.array() - w.x0).matrix();
      base1.setConstant(w.omega);
      break;
    case SuperpotentialBase::linear_mu: {
      RVec x0v(1);
      x0v[0] = w.x0;
      auto mu = analytic_mu(p, x);
      auto mu0 = analytic_mu(p, x0v);
      if (mu && mu0) {
        base = w.omega * (mu->array() - (*mu0)[0]).matrix();
      } else {
        RVec mun = cumulative_integral(grid, U.cwiseInverse());
        // linear interpolation of the numerical mu at x0, clamped to the box
        double t = std::clamp((w.x0 - grid.x_min) / grid.h, 0.0, double(grid.n - 1));
        int i0 = std::min(int(t), grid.n - 2);
        double f = t - i0;
        double m0 = (1.0 - f) * mun[i0] + f * mun[i0 + 1];
        base = w.omega * (mun.array() - m0).matrix();
      }
      base1 = w.omega * U.cwiseInverse();
      break;
    }
    case SuperpotentialBase::x_times_U:
      base = w.omega * x.cwiseProduct(U);
      base1 = w.omega * (U + x.cwiseProduct(U1));
      break;
  }
  RVec W, W1;
  switch (w.kind) {
    case SuperpotentialKind::alpha_independent:
      W = base;
      W1 = base1;
      break;
    case SuperpotentialKind::closed_form_in_alpha:
      W = base + w.nu * (alpha - 0.5) * U1;
      W1 = base1 + w.nu * (alpha - 0.5) * U2;
      break;
    case SuperpotentialKind::saturating:
      W = (alpha - 0.5) * U1;
      W1 = (alpha - 0.5) * U2;
      break;
  }
  return SuperpotentialSamples{GridFunction::from_real(grid, W), GridFunction::from_real(grid, W1)};
}

double superpotential_derivative_mismatch(const SuperpotentialFamily& w, const MassProfile& p, double alpha,
                                          const std::vector<double>& points) {
  double worst = 0.0;
  const double h = 1e-3;
  for (double x : points) {
    Grid g = make_grid(x - 2 * h, x + 2 * h, 5);
    SuperpotentialSamples s = eval_superpotential(w, p, alpha, g);
    RVec W = s.W.real();
    double fd = (W[0] - 8.0 * W[1] + 8.0 * W[3] - W[4]) / (12.0 * g.h);
    double an = s.W1.real()[2];
    worst = std::max(worst, std::abs(fd - an) / std::max(1.0, std::abs(an)));
  }
  return worst;
}

}  // namespace pdm
