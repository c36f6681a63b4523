#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rungscope {

enum ExitCode : int {
  kExitOk = 0,
  kExitOther = 1,
  kExitConfig = 2,
  kExitNumerical = 3,
  kExitIo = 4,
};

/// Entry point of the `rungscope` tool. Subcommands: analytics, simulate,
/// sweep, oracle-validate. Every config key is also a `--key-name value`
/// option applied on top of `--config`. Reports go to `out`, diagnostics to
/// `err`.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_command(int argc, char** argv);

}  // namespace rungscope
