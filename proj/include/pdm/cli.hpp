#pragma once

#include "pdm/config.hpp"
#include "pdm/numcore.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace pdm {

// Process exit status of pdm-isospec.
enum class ExitCode : int {
  ok = 0,
  parse_error = 2,          // command line or config problem
  numerical_rejection = 3,  // the library rejected the configuration on numerical grounds
  precondition = 4,         // a library precondition failed or an unexpected error occurred
  io_error = 5              // output could not be written
};

int exit_status(ExitCode c);

// Numerical rejections map to 3, precondition failures to 4.
ExitCode exit_code_for(ErrorKind kind);

// 12 significant digits, '.' decimal separator, no locale dependence.
std::string format_number(double v);

struct CommandOutcome {
  ExitCode code = ExitCode::ok;
  std::vector<std::string> files;  // written paths in write order
  std::string error;
};

// Runs one subcommand (spectrum, transform, coherent or symmetry) and writes its files into out_dir.
CommandOutcome run_command(const std::string& command, const RunConfig& cfg, const std::string& out_dir, bool quiet,
                           std::ostream& out, std::ostream& err);

// Entry point of the pdm-isospec executable.
int cli_main(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace pdm
