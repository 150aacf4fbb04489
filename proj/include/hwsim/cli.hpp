#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hwsim::cli {

/// Run one CLI invocation (args excludes the program name). Reports go to
/// `out` or to the --output file; diagnostics to `err`. Returns the process
/// exit code: nonzero when a pass/fail check fails or the config is invalid.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hwsim::cli
