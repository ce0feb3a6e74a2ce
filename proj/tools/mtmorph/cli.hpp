#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mtmorph::cli {

enum ExitCode : int {
  kPass = 0,
  kOperationalError = 1,
  kRelationFailed = 2,
  kUsage = 64,
};

/// Entry point behind the `mtmorph` binary. `args` excludes the program
/// name. Human-readable output goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mtmorph::cli
