#pragma once

#include "pdm/numcore.hpp"
#include "pdm/profiles.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace pdm {

// Configuration problem with the location of the offending entry (line and column are 1-based, 0 if unknown).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& field, int line, int column, const std::string& message);

  const std::string& field() const { return field_; }
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  std::string field_;
  int line_;
  int column_;
};

struct RunConfig {
  std::string source;  // path or label the config was read from

  // profile (required)
  MassProfile profile;

  // superpotential
  SuperpotentialFamily superpotential;

  // domain
  double x_min = -12.0;
  double x_max = 12.0;
  int n = 4001;

  // ordering
  std::vector<double> alphas{1.0};
  int n_index = 1;

  // epsilon: explicit value, or the ground energy of -1/2 d/dx U^2 d/dx + V_ref with V_ref a polynomial
  std::optional<double> epsilon_value;
  std::vector<double> reference_potential;

  // spectrum
  int levels = 6;

  // transform
  std::vector<double> lambdas{1.0};
  int states = 3;

  // coherent
  std::vector<cplx> zs{cplx(0.0)};
  std::vector<std::string> z_text{"0"};

  // output
  std::string format = "both";  // csv, json or both
  std::string out_path = "results";
};

// Parses YAML text. Throws ConfigError naming the block or field and its position.
RunConfig parse_config(const std::string& text, const std::string& source = "<memory>");

// Reads and parses a config file. A missing or unreadable file is reported as a ConfigError on field "file".
RunConfig load_config(const std::string& path);

// Parses "0", "0.5i", "-i", "0+0.25i" and similar. Throws std::invalid_argument on malformed input.
cplx parse_complex(const std::string& text);

}  // namespace pdm
