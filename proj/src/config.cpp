#include "pdm/config.hpp"

#include <yaml-cpp/yaml.h>

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace pdm {

ConfigError::ConfigError(const std::string& field, int line, int column, const std::string& message)
    : std::runtime_error([&] {
        std::ostringstream os;
        os << "config error";
        if (line > 0) os << " at line " << line << ", column " << column;
        os << " [" << field << "]: " << message;
        return os.str();
      }()),
      field_(field),
      line_(line),
      column_(column) {}

namespace {

[[noreturn]] void fail(const YAML::Node& node, const std::string& field, const std::string& message) {
  const YAML::Mark m = node.Mark();
  const bool known = !m.is_null();
  throw ConfigError(field, known ? m.line + 1 : 0, known ? m.column + 1 : 0, message);
}

void check_keys(const YAML::Node& block, const std::string& name, const std::set<std::string>& allowed) {
  if (!block.IsMap()) fail(block, name, "block '" + name + "' must be a mapping");
  for (const auto& kv : block) {
    const std::string key = kv.first.as<std::string>();
    if (!allowed.count(key)) {
      std::string list;
      for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
      fail(kv.first, name + "." + key, "unknown key '" + key + "' in block '" + name + "' (allowed: " + list + ")");
    }
  }
}

double read_double(const YAML::Node& node, const std::string& field) {
  if (!node.IsScalar()) fail(node, field, "expected a number");
  const std::string s = node.Scalar();
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) fail(node, field, "expected a number, got '" + s + "'");
  return v;
}

int read_int(const YAML::Node& node, const std::string& field) {
  if (!node.IsScalar()) fail(node, field, "expected an integer");
  const std::string s = node.Scalar();
  int v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) fail(node, field, "expected an integer, got '" + s + "'");
  return v;
}

std::string read_string(const YAML::Node& node, const std::string& field) {
  if (!node.IsScalar()) fail(node, field, "expected a string");
  return node.Scalar();
}

// A scalar or a sequence of scalars.
std::vector<double> read_doubles(const YAML::Node& node, const std::string& field) {
  std::vector<double> out;
  if (node.IsSequence()) {
    for (std::size_t i = 0; i < node.size(); ++i)
      out.push_back(read_double(node[i], field + "[" + std::to_string(i) + "]"));
  } else {
    out.push_back(read_double(node, field));
  }
  return out;
}

void parse_profile(const YAML::Node& root, RunConfig& cfg) {
  const YAML::Node b = root["profile"];
  if (!b) fail(root, "profile", "missing required block 'profile'");
  check_keys(b, "profile", {"family", "m0", "a0", "p", "x", "m"});
  if (!b["family"]) fail(b, "profile.family", "missing required key 'family'");
  const std::string fam = read_string(b["family"], "profile.family");
  ProfileFamily f;
  try {
    f = profile_family_from_string(fam);
  } catch (const Error& e) {
    fail(b["family"], "profile.family", e.what());
  }
  auto param = [&](const char* key, double dflt) {
    return b[key] ? read_double(b[key], std::string("profile.") + key) : dflt;
  };
  switch (f) {
    case ProfileFamily::constant: {
      const double m0 = param("m0", 1.0);
      if (!(m0 > 0)) fail(b["m0"], "profile.m0", "m0 must be positive");
      cfg.profile = constant_profile(m0);
      break;
    }
    case ProfileFamily::rational: {
      const double a0 = param("a0", 2.0);
      if (!(a0 > 0)) fail(b["a0"], "profile.a0", "a0 must be positive");
      cfg.profile = rational_profile(a0);
      break;
    }
    case ProfileFamily::inverse_quadratic:
      cfg.profile = inverse_quadratic_profile();
      break;
    case ProfileFamily::power:
      if (!b["p"]) fail(b, "profile.p", "family 'power' needs the exponent 'p'");
      cfg.profile = power_profile(read_double(b["p"], "profile.p"));
      break;
    case ProfileFamily::tabulated: {
      if (!b["x"] || !b["m"]) fail(b, "profile.x", "family 'tabulated' needs the lists 'x' and 'm'");
      std::vector<double> xs = read_doubles(b["x"], "profile.x");
      std::vector<double> ms = read_doubles(b["m"], "profile.m");
      if (xs.size() != ms.size() || xs.size() < 4)
        fail(b["m"], "profile.m", "'x' and 'm' must have equal length of at least 4");
      for (std::size_t i = 1; i < xs.size(); ++i)
        if (!(xs[i] > xs[i - 1])) fail(b["x"], "profile.x", "'x' must be strictly increasing");
      cfg.profile = tabulated_profile(xs, ms);
      break;
    }
  }
}

void parse_superpotential(const YAML::Node& root, RunConfig& cfg) {
  const YAML::Node b = root["superpotential"];
  if (!b) return;
  check_keys(b, "superpotential", {"kind", "base", "omega", "x0", "nu"});
  SuperpotentialFamily& w = cfg.superpotential;
  try {
    if (b["kind"]) w.kind = superpotential_kind_from_string(read_string(b["kind"], "superpotential.kind"));
  } catch (const Error& e) {
    fail(b["kind"], "superpotential.kind", e.what());
  }
  try {
    if (b["base"]) w.base = superpotential_base_from_string(read_string(b["base"], "superpotential.base"));
  } catch (const Error& e) {
    fail(b["base"], "superpotential.base", e.what());
  }
  if (b["omega"]) w.omega = read_double(b["omega"], "superpotential.omega");
  if (b["x0"]) w.x0 = read_double(b["x0"], "superpotential.x0");
  if (b["nu"]) w.nu = read_double(b["nu"], "superpotential.nu");
}

void parse_domain(const YAML::Node& root, RunConfig& cfg) {
  const YAML::Node b = root["domain"];
  if (!b) return;
  check_keys(b, "domain", {"x_min", "x_max", "n"});
  if (b["x_min"]) cfg.x_min = read_double(b["x_min"], "domain.x_min");
  if (b["x_max"]) cfg.x_max = read_double(b["x_max"], "domain.x_max");
  if (b["n"]) cfg.n = read_int(b["n"], "domain.n");
  if (!(cfg.x_min < cfg.x_max)) fail(b, "domain", "x_min must be smaller than x_max");
  if (cfg.n < 16) fail(b["n"] ? b["n"] : b, "domain.n", "n must be at least 16");
}

void parse_ordering(const YAML::Node& root, RunConfig& cfg) {
  const YAML::Node b = root["ordering"];
  if (!b) return;
  check_keys(b, "ordering", {"alpha", "n_index"});
  if (b["alpha"]) cfg.alphas = read_doubles(b["alpha"], "ordering.alpha");
  if (cfg.alphas.empty()) fail(b["alpha"], "ordering.alpha", "alpha list must not be empty");
  for (double a : cfg.alphas)
    if (!(a >= 0.0 && a <= 1.0)) fail(b["alpha"], "ordering.alpha", "every alpha must lie in [0, 1]");
  if (b["n_index"]) cfg.n_index = read_int(b["n_index"], "ordering.n_index");
  if (cfg.n_index < 1) fail(b["n_index"], "ordering.n_index", "n_index must be at least 1");
}

void parse_epsilon(const YAML::Node& root, RunConfig& cfg) {
  const YAML::Node b = root["epsilon"];
  if (!b) return;
  check_keys(b, "epsilon", {"value", "reference_potential"});
  if (b["value"] && b["reference_potential"])
    fail(b, "epsilon", "give either 'value' or 'reference_potential', not both");
  if (b["value"]) cfg.epsilon_value = read_double(b["value"], "epsilon.value");
  if (b["reference_potential"])
    cfg.reference_potential = read_doubles(b["reference_potential"], "epsilon.reference_potential");
}

void parse_spectrum(const YAML::Node& root, RunConfig& cfg) {
  const YAML::Node b = root["spectrum"];
  if (!b) return;
  check_keys(b, "spectrum", {"levels"});
  if (b["levels"]) cfg.levels = read_int(b["levels"], "spectrum.levels");
  if (cfg.levels < 2) fail(b["levels"], "spectrum.levels", "levels must be at least 2");
}

void parse_transform(const YAML::Node& root, RunConfig& cfg) {
  const YAML::Node b = root["transform"];
  if (!b) return;
  check_keys(b, "transform", {"lambda", "states"});
  if (b["lambda"]) cfg.lambdas = read_doubles(b["lambda"], "transform.lambda");
  if (cfg.lambdas.empty()) fail(b["lambda"], "transform.lambda", "lambda list must not be empty");
  if (b["states"]) cfg.states = read_int(b["states"], "transform.states");
  if (cfg.states < 1) fail(b["states"], "transform.states", "states must be at least 1");
}

void parse_coherent(const YAML::Node& root, RunConfig& cfg) {
  const YAML::Node b = root["coherent"];
  if (!b) return;
  check_keys(b, "coherent", {"z"});
  if (!b["z"]) return;
  const YAML::Node zn = b["z"];
  std::vector<YAML::Node> items;
  if (zn.IsSequence()) {
    for (std::size_t i = 0; i < zn.size(); ++i) items.push_back(zn[i]);
  } else {
    items.push_back(zn);
  }
  if (items.empty()) fail(zn, "coherent.z", "z list must not be empty");
  cfg.zs.clear();
  cfg.z_text.clear();
  for (std::size_t i = 0; i < items.size(); ++i) {
    const std::string field = "coherent.z[" + std::to_string(i) + "]";
    const std::string s = read_string(items[i], field);
    cplx z;
    try {
      z = parse_complex(s);
    } catch (const std::invalid_argument&) {
      fail(items[i], field, "cannot read '" + s + "' as a complex number (use forms like 0.5i or -i)");
    }
    if (z.real() != 0.0)
      fail(items[i], field, "z = " + s + " must be purely imaginary (the displacement is unitary only for z = -z*)");
    cfg.zs.push_back(z);
    cfg.z_text.push_back(s);
  }
}

void parse_output(const YAML::Node& root, RunConfig& cfg) {
  const YAML::Node b = root["output"];
  if (!b) return;
  check_keys(b, "output", {"format", "path"});
  if (b["format"]) cfg.format = read_string(b["format"], "output.format");
  if (cfg.format != "csv" && cfg.format != "json" && cfg.format != "both")
    fail(b["format"], "output.format", "format must be csv, json or both");
  if (b["path"]) cfg.out_path = read_string(b["path"], "output.path");
}

double parse_real(const std::string& s) {
  if (s.empty() || s == "+") return 1.0;
  if (s == "-") return -1.0;
  double v = 0.0;
  const char* begin = s.data();
  if (*begin == '+') ++begin;
  auto res = std::from_chars(begin, s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw std::invalid_argument(s);
  return v;
}

}  // namespace

cplx parse_complex(const std::string& text) {
  std::string s;
  for (char c : text)
    if (c != ' ' && c != '*') s += c;
  if (s.empty()) throw std::invalid_argument(text);
  const char last = s.back();
  if (last != 'i' && last != 'j') {
    if (s == "+" || s == "-") throw std::invalid_argument(text);
    return cplx(parse_real(s), 0.0);
  }
  s.pop_back();
  std::size_t split = std::string::npos;
  for (std::size_t k = s.size(); k-- > 1;) {
    if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  if (split == std::string::npos) return cplx(0.0, parse_real(s));
  const std::string re = s.substr(0, split);
  if (re.empty() || re == "+" || re == "-") throw std::invalid_argument(text);
  return cplx(parse_real(re), parse_real(s.substr(split)));
}

RunConfig parse_config(const std::string& text, const std::string& source) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError("syntax", e.mark.line + 1, e.mark.column + 1, e.msg);
  }
  if (!root || root.IsNull()) throw ConfigError("profile", 0, 0, "empty config, missing required block 'profile'");
  if (!root.IsMap()) fail(root, "root", "top level must be a mapping of blocks");
  check_keys(root, "root",
             {"profile", "superpotential", "domain", "ordering", "epsilon", "spectrum", "transform", "coherent",
              "output"});
  RunConfig cfg;
  cfg.source = source;
  try {
    parse_profile(root, cfg);
    parse_superpotential(root, cfg);
    parse_domain(root, cfg);
    parse_ordering(root, cfg);
    parse_epsilon(root, cfg);
    parse_spectrum(root, cfg);
    parse_transform(root, cfg);
    parse_coherent(root, cfg);
    parse_output(root, cfg);
  } catch (const YAML::Exception& e) {
    throw ConfigError("syntax", e.mark.line + 1, e.mark.column + 1, e.msg);
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("file", 0, 0, "cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

}  // namespace pdm
