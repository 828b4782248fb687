#include "catch_amalgamated.hpp"

#include "pdm/cli.hpp"
#include "pdm/config.hpp"

#include "json.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

using namespace pdm;
namespace fs = std::filesystem;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;

namespace {

const char* kHarmonic = R"(profile:
  family: constant
  m0: 1.0
superpotential:
  kind: alpha_independent
  base: linear_x
domain:
  x_min: -10
  x_max: 10
  n: 801
ordering:
  alpha: [1.0, 0.5]
epsilon:
  reference_potential: [0.0, 0.0, 0.5]
spectrum:
  levels: 4
transform:
  lambda: [1, 2]
  states: 2
coherent:
  z: [0, 0.5i]
output:
  format: both
)";

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("pdm_cli_" + std::to_string(::getpid())) / name;
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

ConfigError config_error_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e;
  }
  FAIL("config was accepted: " << text);
  return ConfigError("", 0, 0, "");
}

int run_cli(std::vector<std::string> args, std::string* err_text = nullptr) {
  args.insert(args.begin(), "pdm-isospec");
  std::vector<char*> argv;
  for (std::string& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  const int code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  if (err_text) *err_text = err.str();
  return code;
}

}  // namespace

TEST_CASE("complex labels", "[cli]") {
  CHECK(parse_complex("0") == cplx(0.0));
  CHECK(parse_complex("0.5i") == cplx(0.0, 0.5));
  CHECK(parse_complex("-i") == cplx(0.0, -1.0));
  CHECK(parse_complex("i") == cplx(0.0, 1.0));
  CHECK(parse_complex("0+0.25i") == cplx(0.0, 0.25));
  CHECK(parse_complex("1.5") == cplx(1.5, 0.0));
  CHECK(parse_complex("2-3i") == cplx(2.0, -3.0));
  CHECK_THROWS_AS(parse_complex("abc"), std::invalid_argument);
  CHECK_THROWS_AS(parse_complex(""), std::invalid_argument);
}

TEST_CASE("config parsing with defaults", "[cli]") {
  const RunConfig c = parse_config("profile:\n  family: rational\n  a0: 3\n");
  CHECK(c.profile.family == ProfileFamily::rational);
  CHECK(c.profile.params == std::vector<double>{3.0});
  CHECK(c.x_min == -12.0);
  CHECK(c.x_max == 12.0);
  CHECK(c.n == 4001);
  CHECK(c.alphas == std::vector<double>{1.0});
  CHECK(c.levels == 6);
  CHECK(c.format == "both");
  CHECK_FALSE(c.epsilon_value.has_value());

  const RunConfig h = parse_config(kHarmonic);
  CHECK(h.alphas == std::vector<double>{1.0, 0.5});
  CHECK(h.reference_potential == std::vector<double>{0.0, 0.0, 0.5});
  REQUIRE(h.zs.size() == 2);
  CHECK(h.zs[1] == cplx(0.0, 0.5));
  CHECK(h.lambdas == std::vector<double>{1.0, 2.0});
}

TEST_CASE("config errors name the field and position", "[cli]") {
  const ConfigError missing = config_error_of("domain:\n  n: 101\n");
  CHECK(missing.field() == "profile");
  CHECK_THAT(missing.what(), ContainsSubstring("missing required block 'profile'"));

  const ConfigError unknown = config_error_of("profile:\n  family: constant\n  mass: 2\n");
  CHECK(unknown.field() == "profile.mass");
  CHECK(unknown.line() == 3);

  const ConfigError real_z = config_error_of("profile:\n  family: constant\ncoherent:\n  z: [0.5]\n");
  CHECK(real_z.field().rfind("coherent.z", 0) == 0);
  CHECK(real_z.line() == 4);

  CHECK(config_error_of("profile:\n  family: constant\nordering:\n  alpha: 1.5\n").field() == "ordering.alpha");
  CHECK(config_error_of("profile:\n  family: constant\ndomain:\n  n: 8\n").field() == "domain.n");
  CHECK(config_error_of("profile:\n  family: constant\ndomain:\n  x_min: 1\n  x_max: -1\n").field() == "domain");
  CHECK(config_error_of("profile:\n  family: constant\noutput:\n  format: xml\n").field() == "output.format");
  CHECK(config_error_of("profile:\n  family: quartic\n").field() == "profile.family");
  CHECK(config_error_of("profile: [1, 2\n").field() == "syntax");
  CHECK(config_error_of("profile:\n  family: constant\nepsilon:\n  value: 1\n  reference_potential: [0]\n").field() ==
        "epsilon");
}

TEST_CASE("exit codes", "[cli]") {
  CHECK(exit_status(ExitCode::ok) == 0);
  CHECK(exit_status(ExitCode::parse_error) == 2);
  CHECK(exit_code_for(ErrorKind::non_normalizable) == ExitCode::numerical_rejection);
  CHECK(exit_code_for(ErrorKind::pole) == ExitCode::numerical_rejection);
  CHECK(exit_code_for(ErrorKind::alpha_range) == ExitCode::precondition);
  CHECK(exit_code_for(ErrorKind::grid_mismatch) == ExitCode::precondition);
}

TEST_CASE("number formatting", "[cli]") {
  CHECK(format_number(0.0) == "0");
  CHECK(format_number(-0.0) == "0");
  CHECK(format_number(0.5) == "0.5");
  CHECK(format_number(1.0 / 3.0) == "0.333333333333");
  CHECK(format_number(1e-20) == "1e-20");
  CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
}

TEST_CASE("every subcommand writes CSV and JSON", "[cli]") {
  const RunConfig cfg = parse_config(kHarmonic);
  for (const std::string cmd : {"spectrum", "transform", "coherent", "symmetry"}) {
    const fs::path dir = scratch_dir("all_" + cmd);
    std::ostringstream out, err;
    const CommandOutcome r = run_command(cmd, cfg, dir.string(), false, out, err);
    INFO(cmd << ": " << err.str());
    CHECK(r.code == ExitCode::ok);
    REQUIRE(r.files.size() == 2);
    CHECK(fs::exists(dir / (cmd + ".csv")));
    CHECK_FALSE(fs::exists(dir / (cmd + ".csv.tmp")));
    const nlohmann::json doc = nlohmann::json::parse(slurp(dir / (cmd + ".json")));
    CHECK(doc["command"] == cmd);
    CHECK(doc["config"]["domain"]["n"] == 801);
    CHECK_THAT(out.str(), ContainsSubstring("wrote"));
  }
}

TEST_CASE("spectrum report content", "[cli]") {
  const RunConfig cfg = parse_config(kHarmonic);
  const fs::path dir = scratch_dir("spectrum");
  std::ostringstream out, err;
  REQUIRE(run_command("spectrum", cfg, dir.string(), true, out, err).code == ExitCode::ok);
  CHECK(out.str().empty());
  const std::string csv = slurp(dir / "spectrum.csv");
  CHECK(csv.rfind("alpha,lambda,level,E_base,E_transformed,abs_diff\n", 0) == 0);
  const nlohmann::json doc = nlohmann::json::parse(slurp(dir / "spectrum.json"));
  CHECK_THAT(doc["epsilon"].get<double>(), WithinAbs(0.5, 1e-3));
}

TEST_CASE("repeated runs are byte-identical", "[cli]") {
  const RunConfig cfg = parse_config(kHarmonic);
  for (const std::string cmd : {"spectrum", "coherent"}) {
    const fs::path a = scratch_dir("det_a_" + cmd), b = scratch_dir("det_b_" + cmd);
    std::ostringstream out, err;
    REQUIRE(run_command(cmd, cfg, a.string(), true, out, err).code == ExitCode::ok);
    REQUIRE(run_command(cmd, cfg, b.string(), true, out, err).code == ExitCode::ok);
    CHECK(slurp(a / (cmd + ".csv")) == slurp(b / (cmd + ".csv")));
    CHECK(slurp(a / (cmd + ".json")) == slurp(b / (cmd + ".json")));
  }
}

TEST_CASE("rejections are reported per item and by the exit code", "[cli]") {
  RunConfig cfg = parse_config(kHarmonic);
  cfg.lambdas = {1.0, -0.5};
  const fs::path dir = scratch_dir("partial");
  std::ostringstream out, err;
  CHECK(run_command("transform", cfg, dir.string(), true, out, err).code == ExitCode::ok);
  const nlohmann::json doc = nlohmann::json::parse(slurp(dir / "transform.json"));
  CHECK(doc["rejections"].size() == cfg.alphas.size());

  cfg.lambdas = {-0.5};
  CHECK(run_command("transform", cfg, scratch_dir("all_rejected").string(), true, out, err).code ==
        ExitCode::numerical_rejection);
  CHECK(run_command("integrate", cfg, dir.string(), true, out, err).code == ExitCode::parse_error);
}

TEST_CASE("unwritable output directory", "[cli]") {
  const fs::path blocker = scratch_dir("blocker");
  fs::create_directories(blocker.parent_path());
  std::ofstream(blocker) << "not a directory";
  std::ostringstream out, err;
  const CommandOutcome r = run_command("symmetry", parse_config(kHarmonic), (blocker / "sub").string(), true, out, err);
  CHECK(r.code == ExitCode::io_error);
}

TEST_CASE("command line handling", "[cli]") {
  const fs::path dir = scratch_dir("cmdline");
  fs::create_directories(dir);
  const fs::path cfg = dir / "run.yaml";
  std::ofstream(cfg) << kHarmonic;
  std::string err;

  CHECK(run_cli({"symmetry", "--config", cfg.string(), "--out", (dir / "out").string(), "--quiet", "--grid-n", "401"}) ==
        0);
  const nlohmann::json doc = nlohmann::json::parse(slurp(dir / "out" / "symmetry.json"));
  CHECK(doc["grid"]["n"] == 401);

  CHECK(run_cli({"symmetry"}, &err) == 2);
  CHECK(run_cli({"render", "--config", cfg.string()}) == 2);
  CHECK(run_cli({"symmetry", "--config", cfg.string(), "--grid-n", "4"}) == 2);
  CHECK(run_cli({"symmetry", "--config", (dir / "absent.yaml").string()}, &err) == 2);
  CHECK_THAT(err, ContainsSubstring("absent.yaml"));

  const fs::path bad = dir / "bad.yaml";
  std::ofstream(bad) << "profile:\n  family: constant\ncoherent:\n  z: [1]\n";
  CHECK(run_cli({"coherent", "--config", bad.string()}, &err) == 2);
  CHECK_THAT(err, ContainsSubstring("line 4"));
}

TEST_CASE("shipped example configs are valid", "[cli]") {
  int count = 0;
  for (const auto& entry : fs::directory_iterator(fs::path(PDM_SOURCE_DIR) / "configs")) {
    if (entry.path().extension() != ".yaml") continue;
    INFO(entry.path().string());
    CHECK_NOTHROW(load_config(entry.path().string()));
    ++count;
  }
  CHECK(count >= 4);
}
