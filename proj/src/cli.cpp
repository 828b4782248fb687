#include "pdm/cli.hpp"

#include "pdm/coherent.hpp"
#include "pdm/hamiltonian.hpp"
#include "pdm/isospectral.hpp"
#include "pdm/ladder.hpp"
#include "pdm/profiles.hpp"
#include "pdm/z2symmetry.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace pdm {

namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

// Relative drift allowed between the n and 2n-1 node base spectra.
constexpr double kConvergenceTol = 1e-4;
// Tolerance for deciding that a level sits at epsilon.
constexpr double kLevelTol = 1e-4;

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

json num(double v) {
  if (!std::isfinite(v)) return nullptr;
  return std::strtod(format_number(v).c_str(), nullptr);
}

json nums(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(num(x));
  return a;
}

std::string complex_text(cplx z) {
  std::string s = format_number(z.real());
  s += z.imag() < 0 ? "-" : "+";
  s += format_number(std::abs(z.imag())) + "i";
  return s;
}

json cnum(cplx z) { return json{{"re", num(z.real())}, {"im", num(z.imag())}}; }

json profile_json(const MassProfile& p) {
  json j;
  j["family"] = to_string(p.family);
  switch (p.family) {
    case ProfileFamily::constant: j["m0"] = num(p.params.at(0)); break;
    case ProfileFamily::rational: j["a0"] = num(p.params.at(0)); break;
    case ProfileFamily::inverse_quadratic: break;
    case ProfileFamily::power: j["p"] = num(p.params.at(0)); break;
    case ProfileFamily::tabulated:
      j["x"] = nums(p.table_x);
      j["m"] = nums(p.table_m);
      break;
  }
  return j;
}

json config_json(const RunConfig& c) {
  json j;
  j["profile"] = profile_json(c.profile);
  j["superpotential"] = {{"kind", to_string(c.superpotential.kind)},
                         {"base", to_string(c.superpotential.base)},
                         {"omega", num(c.superpotential.omega)},
                         {"x0", num(c.superpotential.x0)},
                         {"nu", num(c.superpotential.nu)}};
  j["domain"] = {{"x_min", num(c.x_min)}, {"x_max", num(c.x_max)}, {"n", c.n}};
  j["ordering"] = {{"alpha", nums(c.alphas)}, {"n_index", c.n_index}};
  json e;
  if (c.epsilon_value) {
    e["value"] = num(*c.epsilon_value);
  } else if (!c.reference_potential.empty()) {
    e["reference_potential"] = nums(c.reference_potential);
  } else {
    e["value"] = num(0.0);
  }
  j["epsilon"] = e;
  j["spectrum"] = {{"levels", c.levels}};
  j["transform"] = {{"lambda", nums(c.lambdas)}, {"states", c.states}};
  json zs = json::array();
  for (const std::string& s : c.z_text) zs.push_back(s);
  j["coherent"] = {{"z", zs}};
  j["output"] = {{"format", c.format}, {"path", c.out_path}};
  return j;
}

void write_atomic(const fs::path& path, const std::string& content) {
  std::error_code ec;
  fs::create_directories(path.parent_path(), ec);
  if (ec) throw IoError("cannot create directory '" + path.parent_path().string() + "': " + ec.message());
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
    out << content;
    out.flush();
    if (!out) throw IoError("write to '" + tmp.string() + "' failed");
  }
  fs::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename '" + tmp.string() + "' to '" + path.string() + "': " + ec.message());
}

json error_json(const Error& e) { return json{{"module", e.module()}, {"message", e.what()}}; }

double epsilon_for(const RunConfig& c, const Grid& g) {
  if (c.epsilon_value) return *c.epsilon_value;
  if (c.reference_potential.empty()) return 0.0;
  const RVec x = g.nodes();
  RVec v = RVec::Zero(g.n);
  for (std::size_t k = c.reference_potential.size(); k-- > 0;) v = (v.array() * x.array() + c.reference_potential[k]).matrix();
  return ground_energy_epsilon(assemble_direct(c.profile, GridFunction::from_real(g, v), 0.0, g));
}

double value_at(const Grid& g, const RVec& f, double x) {
  const double t = (x - g.x_min) / g.h;
  int i = static_cast<int>(std::floor(t));
  i = std::clamp(i, 0, g.n - 2);
  const double s = t - i;
  return (1.0 - s) * f[i] + s * f[i + 1];
}

json classification_json(const ClassificationReport& r) {
  return json{{"case", to_string(r.profile_case)},
              {"accepted", r.accepted},
              {"alpha_max", num(r.alpha_max)},
              {"message", r.message}};
}

struct Context {
  const RunConfig& cfg;
  Grid grid;
  double epsilon = 0.0;
  json doc;
  std::ostringstream csv;
};

Context make_context(const std::string& command, const RunConfig& cfg) {
  Context ctx{cfg, make_grid(cfg.x_min, cfg.x_max, cfg.n), 0.0, json(), std::ostringstream()};
  ctx.epsilon = epsilon_for(cfg, ctx.grid);
  ctx.doc["command"] = command;
  ctx.doc["config"] = config_json(cfg);
  ctx.doc["epsilon"] = num(ctx.epsilon);
  ctx.doc["grid"] = {{"x_min", num(ctx.grid.x_min)}, {"x_max", num(ctx.grid.x_max)}, {"n", ctx.grid.n},
                     {"h", num(ctx.grid.h)}};
  ctx.doc["classification"] = classification_json(classify_profile(cfg.profile, ctx.grid, cfg.n_index));
  return ctx;
}

// ---------------------------------------------------------------------------

bool cmd_spectrum(Context& ctx) {
  const RunConfig& c = ctx.cfg;
  const Grid& g = ctx.grid;
  const Grid g2 = make_grid(c.x_min, c.x_max, 2 * c.n - 1);
  ctx.csv << "alpha,lambda,level,E_base,E_transformed,abs_diff\n";
  json sections = json::array();
  json rejections = json::array();
  bool all_converged = true;
  for (double alpha : c.alphas) {
    const OrderingParams ord = make_ordering(alpha);
    json conv;
    try {
      SpectralResult b1 = solve_eig(assemble_factorized(build_q_pair(c.profile, c.superpotential, ord, g), ctx.epsilon).op, c.levels);
      SpectralResult b2 = solve_eig(assemble_factorized(build_q_pair(c.profile, c.superpotential, ord, g2), ctx.epsilon).op, c.levels);
      double drift = 0.0;
      for (int k = 0; k < c.levels; ++k) drift = std::max(drift, std::abs(b1.eigenvalues[k] - b2.eigenvalues[k]));
      conv = {{"n", g.n}, {"n_refined", g2.n}, {"max_drift", num(drift)}, {"converged", drift < kConvergenceTol}};
      all_converged = all_converged && drift < kConvergenceTol;
    } catch (const Error& e) {
      rejections.push_back(json{{"alpha", num(alpha)}, {"stage", "base spectrum"}, {"error", error_json(e)}});
      continue;
    }
    MissingState ms = missing_state(c.profile, c.superpotential, ord, g);
    AlphaMembership am = alpha_set_membership(alpha, c.n_index);
    for (double lambda : c.lambdas) {
      try {
        IsospectralFamily fam =
            build_isospectral_family(c.profile, c.superpotential, ord, g, lambda, ctx.epsilon, c.levels);
        SpectrumMatch m = spectrum_match(fam.base_spectrum, fam.transformed_spectrum, ctx.epsilon, kLevelTol);
        for (int k = 0; k < c.levels; ++k) {
          const double eb = fam.base_spectrum.eigenvalues[k];
          const double et = fam.transformed_spectrum.eigenvalues[k];
          ctx.csv << format_number(alpha) << ',' << format_number(lambda) << ',' << k << ',' << format_number(eb)
                  << ',' << format_number(et) << ',' << format_number(std::abs(eb - et)) << '\n';
        }
        json s;
        s["alpha"] = num(alpha);
        s["lambda"] = num(lambda);
        s["alpha_in_admissible_set"] = am.member;
        s["E_base"] = nums(std::vector<double>(fam.base_spectrum.eigenvalues.data(),
                                               fam.base_spectrum.eigenvalues.data() + c.levels));
        s["E_transformed"] = nums(std::vector<double>(fam.transformed_spectrum.eigenvalues.data(),
                                                      fam.transformed_spectrum.eigenvalues.data() + c.levels));
        s["E_partner"] = nums(std::vector<double>(fam.partner_spectrum.eigenvalues.data(),
                                                  fam.partner_spectrum.eigenvalues.data() + c.levels));
        s["excited_max_diff"] = num(m.max_diff);
        s["excited_levels_match"] = m.matched;
        s["missing_state"] = {{"normalizable", ms.normalizable}, {"doubling_ratio", num(ms.doubling_ratio)}};
        s["epsilon_in_partner_spectrum"] = count_level(fam.partner_spectrum, ctx.epsilon, kLevelTol) > 0;
        s["epsilon_in_transformed_spectrum"] = m.epsilon_count > 0;
        s["eigensolver_max_residual"] =
            num(std::max(fam.base_spectrum.max_residual, fam.transformed_spectrum.max_residual));
        s["convergence"] = conv;
        sections.push_back(s);
      } catch (const Error& e) {
        rejections.push_back(json{{"alpha", num(alpha)}, {"lambda", num(lambda)}, {"error", error_json(e)}});
      }
    }
  }
  ctx.doc["sections"] = sections;
  ctx.doc["rejections"] = rejections;
  ctx.doc["grid_converged"] = all_converged;
  return !sections.empty();
}

bool cmd_transform(Context& ctx) {
  const RunConfig& c = ctx.cfg;
  const Grid& g = ctx.grid;
  const RVec x = g.nodes();
  ctx.csv << "alpha,lambda,x,w,W,phi,Xi0,Upsilon\n";
  json sections = json::array();
  json rejections = json::array();
  for (double alpha : c.alphas) {
    const OrderingParams ord = make_ordering(alpha);
    GridFunction xi0;
    LadderPair base;
    SpectralResult states;
    try {
      xi0 = ground_state_xi0(c.profile, c.superpotential, ord, g);
      base = build_q_pair(c.profile, c.superpotential, ord, g);
      states = base_states_fourth_order(c.profile, c.superpotential, ord, g, ctx.epsilon, c.states + 1);
    } catch (const Error& e) {
      rejections.push_back(json{{"alpha", num(alpha)}, {"stage", "ground state"}, {"error", error_json(e)}});
      continue;
    }
    const RVec w = eval_superpotential(c.superpotential, c.profile, alpha, g).W.real();
    MissingState ms = missing_state(c.profile, c.superpotential, ord, g);
    const RVec ups = ms.state.real() / ms.state.real().cwiseAbs().maxCoeff();
    for (double lambda : c.lambdas) {
      try {
        RiccatiShift sh = riccati_shift(GridFunction::from_real(g, w), lambda, xi0, base.U);
        LadderPair shifted = build_pair_from_samples(c.profile, sh.W, alpha, g, lambda);
        const GridFunction Xi0 = transformed_ground(lambda, xi0, g);
        const RVec Wv = sh.W.real(), phi = sh.phi.real(), X = Xi0.real();
        for (int i = 0; i < g.n; ++i) {
          ctx.csv << format_number(alpha) << ',' << format_number(lambda) << ',' << format_number(x[i]) << ','
                  << format_number(w[i]) << ',' << format_number(Wv[i]) << ',' << format_number(phi[i]) << ','
                  << format_number(X[i]) << ',' << format_number(ups[i]) << '\n';
        }
        const HamiltonianBundle H = assemble_factorized(shifted, ctx.epsilon);
        const cplx rq = inner_product(Xi0, H.op.apply(Xi0));
        json st = json::array();
        for (int k = 1; k <= c.states; ++k) {
          TransformedState ts = transform_state(states.eigenvectors[k], states.eigenvalues[k], ctx.epsilon, lambda,
                                                base, xi0, g);
          const cplx e = inner_product(ts.via_intertwiner, H.op.apply(ts.via_intertwiner));
          st.push_back(json{{"n", k},
                            {"E_n", num(states.eigenvalues[k])},
                            {"closed_form_distance", num(ts.distance)},
                            {"literal_coefficient_distance", num(ts.literal_distance)},
                            {"energy_of_transformed_state", num(e.real())}});
        }
        json s;
        s["alpha"] = num(alpha);
        s["lambda"] = num(lambda);
        s["max_abs_W_minus_w"] = num((Wv - w).cwiseAbs().maxCoeff());
        if (g.x_min <= 0.0 && 0.0 <= g.x_max) s["phi_at_0"] = num(value_at(g, phi, 0.0));
        s["Xi0_rayleigh_error"] = num(std::abs(rq.real() - ctx.epsilon));
        s["intertwining_residual"] =
            num(intertwining_residual(base, shifted, ctx.epsilon, g, gaussian_test_set(g)));
        s["states"] = st;
        s["missing_state"] = {{"normalizable", ms.normalizable}, {"doubling_ratio", num(ms.doubling_ratio)}};
        sections.push_back(s);
      } catch (const Error& e) {
        rejections.push_back(json{{"alpha", num(alpha)}, {"lambda", num(lambda)}, {"error", error_json(e)}});
      }
    }
  }
  ctx.doc["sections"] = sections;
  ctx.doc["rejections"] = rejections;
  return !sections.empty();
}

json expectation_json(const ExpectationReport& e) {
  auto pair = [](cplx q, cplx c) { return json{{"quadrature", cnum(q)}, {"closed_form", cnum(c)}}; };
  return json{{"W", pair(e.W, e.W_closed)},
              {"Pi", pair(e.Pi, e.Pi_closed)},
              {"W2", pair(e.W2, e.W2_closed)},
              {"Pi2", pair(e.Pi2, e.Pi2_closed)}};
}

bool cmd_coherent(Context& ctx) {
  const RunConfig& c = ctx.cfg;
  const Grid& g = ctx.grid;
  const RVec x = g.nodes();
  ctx.csv << "alpha,z,x,re_psi,im_psi,density\n";
  json sections = json::array();
  json rejections = json::array();
  for (double alpha : c.alphas) {
    json verdict;
    try {
      SignVerdict v = minimization_and_sign(c.profile, c.superpotential, alpha, g);
      json regions = json::array();
      for (const SignRegion& r : v.regions) {
        regions.push_back(json{{"x_begin", num(r.x_begin)},
                               {"x_end", num(r.x_end)},
                               {"sign_of_1m2alpha_Uprime", r.sign_of_driver},
                               {"case", r.required_sign > 0 ? "C1" : "C2"},
                               {"required_sign_of_W", r.required_sign},
                               {"satisfied", r.satisfied}});
      }
      verdict = json{{"sign", to_string(v.sign)}, {"summary", v.summary}, {"regions", regions}};
    } catch (const Error& e) {
      rejections.push_back(json{{"alpha", num(alpha)}, {"stage", "sign verdict"}, {"error", error_json(e)}});
      continue;
    }
    for (std::size_t iz = 0; iz < c.zs.size(); ++iz) {
      const cplx z = c.zs[iz];
      try {
        CoherentStateRecord rec = cs_construct(z, alpha, c.profile, c.superpotential, g);
        ExpectationReport ex = expectations(rec, c.profile, c.superpotential, g);
        GurReport gr = gur_product(rec, c.profile, c.superpotential, alpha, g);
        MirroredState mir = cs_mirrored(z, alpha, c.profile, c.superpotential, g);
        for (int i = 0; i < g.n; ++i) {
          const cplx p = rec.psi.values[i];
          ctx.csv << format_number(alpha) << ',' << complex_text(z) << ',' << format_number(x[i]) << ','
                  << format_number(p.real()) << ',' << format_number(p.imag()) << ',' << format_number(std::norm(p))
                  << '\n';
        }
        json s;
        s["alpha"] = num(alpha);
        s["z"] = c.z_text[iz];
        s["eigen_residual"] = num(rec.eigen_residual);
        s["discrete_eigen_residual"] = num(rec.discrete_residual);
        s["expectations"] = expectation_json(ex);
        s["gur"] = json{{"var_W", num(gr.var_W)},
                        {"var_Pi", num(gr.var_Pi)},
                        {"product", num(gr.product)},
                        {"commutator_expectation", num(gr.commutator_expect)},
                        {"R_expectation", num(gr.R_expect)},
                        {"bound_quarter_commutator_squared", num(gr.bound)},
                        {"product_identity_rhs", num(gr.rhs_identity)},
                        {"R_max_abs", num(gr.R_alpha_values.real().cwiseAbs().maxCoeff())},
                        {"classification", to_string(gr.classification)},
                        {"sign_of_W", to_string(gr.sign_of_W)}};
        s["sign_verdict"] = verdict;
        s["mirror"] = json{{"factor_check", num(mir.factor_check)}, {"factor_spread", num(mir.factor_spread)}};
        sections.push_back(s);
      } catch (const Error& e) {
        rejections.push_back(json{{"alpha", num(alpha)}, {"z", c.z_text[iz]}, {"error", error_json(e)}});
      }
    }
  }
  ctx.doc["sections"] = sections;
  ctx.doc["rejections"] = rejections;
  return !sections.empty();
}

bool cmd_symmetry(Context& ctx) {
  const RunConfig& c = ctx.cfg;
  const Grid& g = ctx.grid;
  const RVec x = g.nodes();
  const std::vector<GridFunction> tests = gaussian_test_set(g);
  ctx.csv << "alpha,mirror_alpha,x,T,P,F,G\n";
  json pairs = json::array();
  json rejections = json::array();
  double involution_error = 0.0;
  std::vector<double> seen;
  for (double alpha : c.alphas) {
    involution_error = std::max(involution_error, std::abs(mirror_alpha(mirror_alpha(alpha)) - alpha));
    const double lo = std::min(alpha, mirror_alpha(alpha));
    // alpha and 1 - alpha share one record; 1 - (1 - alpha) may differ from alpha in the last bit
    bool dup = false;
    for (double s : seen) dup = dup || std::abs(s - lo) <= 1e-12;
    if (dup) continue;
    seen.push_back(lo);
    const double hi = mirror_alpha(lo);
    try {
      Z2Intertwiner Z = build_intertwiner_Z(c.profile, c.superpotential, lo, g);
      LadderPair pa = build_Qalpha_pair(c.profile, c.superpotential, lo, g);
      LadderPair pb = build_Qalpha_pair(c.profile, c.superpotential, hi, g);
      IntertwinerResidual r = intertwiner_residual(Z, pa, pb, tests);
      CoefficientSolution cs = solve_intertwiner_coefficients(c.profile, c.superpotential, lo, g);
      const RVec T = Z.T_factor.real(), P = Z.P.real(), F = cs.F.real(), G = cs.G.real();
      for (int i = 0; i < g.n; ++i) {
        ctx.csv << format_number(lo) << ',' << format_number(hi) << ',' << format_number(x[i]) << ','
                << format_number(T[i]) << ',' << format_number(P[i]) << ',' << format_number(F[i]) << ','
                << format_number(G[i]) << '\n';
      }
      pairs.push_back(json{{"alphas", nums({lo, hi})},
                           {"intertwiner_residual", num(r.max_residual)},
                           {"intertwiner_residual_per_function", nums(r.per_function)},
                           {"coefficient_matching",
                            json{{"residual", num(cs.residual)},
                                 {"P_discrepancy", num(cs.P_discrepancy)},
                                 {"zeroth_order_discrepancy", num(cs.zeroth_discrepancy)},
                                 {"operator_discrepancy", num(cs.operator_discrepancy)},
                                 {"flagged", cs.flagged},
                                 {"report", cs.report}}}});
    } catch (const Error& e) {
      rejections.push_back(json{{"alphas", nums({lo, hi})}, {"error", error_json(e)}});
    }
  }
  try {
    ctx.doc["fixed_point"] = json{{"alpha", num(0.5)},
                                  {"residual", num(fixed_point_check(c.profile, c.superpotential, g, tests))},
                                  {"entrywise", num(fixed_point_entrywise(c.profile, c.superpotential, g))}};
  } catch (const Error& e) {
    rejections.push_back(json{{"alphas", nums({0.5, 0.5})}, {"stage", "fixed point"}, {"error", error_json(e)}});
  }
  ctx.doc["mirror_involution_max_error"] = num(involution_error);
  ctx.doc["pairs"] = pairs;
  ctx.doc["rejections"] = rejections;
  return !pairs.empty();
}

}  // namespace

int exit_status(ExitCode c) { return static_cast<int>(c); }

ExitCode exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::eig_failure:
    case ErrorKind::nonpositive_mass:
    case ErrorKind::rejected_profile:
    case ErrorKind::non_normalizable:
    case ErrorKind::pole:
    case ErrorKind::degenerate_energy:
    case ErrorKind::overflow:
    case ErrorKind::singular_system:
    case ErrorKind::non_symmetric:
      return ExitCode::numerical_rejection;
    default:
      return ExitCode::precondition;
  }
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

CommandOutcome run_command(const std::string& command, const RunConfig& cfg, const std::string& out_dir, bool quiet,
                           std::ostream& out, std::ostream& err) {
  CommandOutcome outcome;
  const std::map<std::string, bool (*)(Context&)> table{
      {"spectrum", cmd_spectrum}, {"transform", cmd_transform}, {"coherent", cmd_coherent}, {"symmetry", cmd_symmetry}};
  auto it = table.find(command);
  if (it == table.end()) {
    outcome.code = ExitCode::parse_error;
    outcome.error = "unknown command '" + command + "' (expected spectrum, transform, coherent or symmetry)";
    err << outcome.error << '\n';
    return outcome;
  }
  try {
    Context ctx = make_context(command, cfg);
    const bool produced = it->second(ctx);
    const fs::path dir(out_dir);
    if (cfg.format == "csv" || cfg.format == "both") {
      const fs::path p = dir / (command + ".csv");
      write_atomic(p, ctx.csv.str());
      outcome.files.push_back(p.string());
    }
    if (cfg.format == "json" || cfg.format == "both") {
      const fs::path p = dir / (command + ".json");
      write_atomic(p, ctx.doc.dump(2) + "\n");
      outcome.files.push_back(p.string());
    }
    if (!quiet) {
      for (const std::string& f : outcome.files) out << command << ": wrote " << f << '\n';
      const json& rej = ctx.doc["rejections"];
      if (!rej.empty()) out << command << ": " << rej.size() << " configuration(s) rejected, see the JSON report\n";
    }
    if (!produced) {
      outcome.code = ExitCode::numerical_rejection;
      outcome.error = "every configuration was rejected";
      err << command << ": " << outcome.error << '\n';
    }
  } catch (const IoError& e) {
    outcome.code = ExitCode::io_error;
    outcome.error = e.what();
    err << command << ": " << outcome.error << '\n';
  } catch (const Error& e) {
    outcome.code = exit_code_for(e.kind());
    outcome.error = e.what();
    err << command << ": " << outcome.error << '\n';
  } catch (const fs::filesystem_error& e) {
    outcome.code = ExitCode::io_error;
    outcome.error = e.what();
    err << command << ": " << outcome.error << '\n';
  } catch (const std::exception& e) {
    outcome.code = ExitCode::precondition;
    outcome.error = e.what();
    err << command << ": " << outcome.error << '\n';
  }
  return outcome;
}

int cli_main(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Position-dependent-mass isospectral toolkit"};
  app.name("pdm-isospec");
  std::string command;
  std::string config_path;
  std::string out_dir;
  int grid_n = 0;
  bool quiet = false;
  app.add_option("command", command, "spectrum, transform, coherent or symmetry")
      ->required()
      ->check(CLI::IsMember({"spectrum", "transform", "coherent", "symmetry"}));
  app.add_option("--config", config_path, "YAML run configuration")->required();
  app.add_option("--out", out_dir, "output directory (overrides output.path)");
  app.add_option("--grid-n", grid_n, "number of grid nodes (overrides domain.n)")->check(CLI::Range(16, 1 << 24));
  app.add_flag("--quiet", quiet, "suppress progress messages");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return exit_status(ExitCode::ok);
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n' << app.help();
    return exit_status(ExitCode::parse_error);
  }
  RunConfig cfg;
  try {
    cfg = load_config(config_path);
  } catch (const ConfigError& e) {
    err << e.what() << '\n';
    return exit_status(ExitCode::parse_error);
  }
  if (grid_n > 0) cfg.n = grid_n;
  if (!out_dir.empty()) cfg.out_path = out_dir;
  return exit_status(run_command(command, cfg, cfg.out_path, quiet, out, err).code);
}

}  // namespace pdm
