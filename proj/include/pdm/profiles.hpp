#pragma once

#include "pdm/numcore.hpp"

#include <optional>
#include <string>
#include <vector>

namespace pdm {

enum class ProfileFamily { constant, rational, inverse_quadratic, power, tabulated };

std::string to_string(ProfileFamily f);
ProfileFamily profile_family_from_string(const std::string& s);

// Mass profile m(x) with U(x) = m(x)^(-1/2).
//   constant           m = m0                      params {m0}
//   rational           m = ((a0+x^2)/(1+x^2))^2    params {a0}
//   inverse_quadratic  m = (1+x^2)^(-2)            params {}
//   power              m = |x|^(-2p), U = |x|^p    params {p}
//   tabulated          cubic spline through (x_i, m_i), held constant outside the table
struct MassProfile {
  ProfileFamily family = ProfileFamily::constant;
  std::vector<double> params;
  std::vector<double> table_x;
  std::vector<double> table_m;

  bool analytic_derivatives() const { return family != ProfileFamily::tabulated; }
};

MassProfile constant_profile(double m0 = 1.0);
MassProfile rational_profile(double a0 = 2.0);
MassProfile inverse_quadratic_profile();
MassProfile power_profile(double p);
MassProfile tabulated_profile(std::vector<double> xs, std::vector<double> ms);

struct ProfileSamples {
  GridFunction m, U, U1, U2;
};

// Samples m, U, U', U''. Throws nonpositive_mass naming the first offending node.
ProfileSamples eval_profile(const MassProfile& p, const Grid& grid);

// mu(x) = integral of 1/U from x_min, so mu(x_min) = 0.
GridFunction auxiliary_mu(const MassProfile& p, const Grid& grid);

// Closed-form antiderivative of 1/U (arbitrary constant) when the family has one.
std::optional<RVec> analytic_mu(const MassProfile& p, const RVec& x);

struct OrderingParams {
  double alpha = 1.0;
  double a = -0.5;
  double b = 0.0;
};

// a = -alpha/2 and b = (alpha-1)/2, so that m^a d/dx m^b = U^alpha d/dx U^(1-alpha).
OrderingParams make_ordering(double alpha);

enum class ProfileCase { regular, p2_zeros, p1_singular };

std::string to_string(ProfileCase c);

struct ClassificationReport {
  ProfileCase profile_case = ProfileCase::regular;
  bool accepted = true;
  std::vector<int> zero_nodes;      // nodes where U vanishes (m singular)
  std::vector<int> singular_nodes;  // nodes where U is singular (m vanishes or turns negative)
  double alpha_min = 0.0;
  double alpha_max = 1.0;  // 1/n_index
  std::string message;
};

ClassificationReport classify_profile(const MassProfile& p, const Grid& grid, int n_index);

struct AlphaMembership {
  bool member = false;
  double nearest = 0.0;
  int nearest_index = 0;  // n with nearest = 1/n, or 0 for alpha = 0
};

// Membership in {1, 1/2, ..., 1/n_max} together with 0. Ties go to the larger element.
AlphaMembership alpha_set_membership(double alpha, int n_max);

// ---------------------------------------------------------------------------
// Superpotential families W_alpha(x)

enum class SuperpotentialKind { alpha_independent, closed_form_in_alpha, saturating };
enum class SuperpotentialBase { zero, linear_x, linear_mu, x_times_U };

std::string to_string(SuperpotentialKind k);
std::string to_string(SuperpotentialBase b);
SuperpotentialKind superpotential_kind_from_string(const std::string& s);
SuperpotentialBase superpotential_base_from_string(const std::string& s);

// base:   zero        0
//         linear_x    omega (x - x0)
//         linear_mu   omega (mu(x) - mu(x0))
//         x_times_U   omega x U(x)
// kind:   alpha_independent     W_alpha = base
//         closed_form_in_alpha  W_alpha = base + nu (alpha - 1/2) U'
//         saturating            W_alpha = (alpha - 1/2) U'
struct SuperpotentialFamily {
  SuperpotentialKind kind = SuperpotentialKind::alpha_independent;
  SuperpotentialBase base = SuperpotentialBase::linear_x;
  double omega = 1.0;
  double x0 = 0.0;
  double nu = 1.0;
};

struct SuperpotentialSamples {
  GridFunction W, W1;
};

SuperpotentialSamples eval_superpotential(const SuperpotentialFamily& w, const MassProfile& p, double alpha,
                                          const Grid& grid);

// Largest mismatch between the analytic derivative and a fine fourth-order difference at the given points.
double superpotential_derivative_mismatch(const SuperpotentialFamily& w, const MassProfile& p, double alpha,
                                          const std::vector<double>& points);

}  // namespace pdm
