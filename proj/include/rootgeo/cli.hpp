#ifndef ROOTGEO_CLI_HPP
#define ROOTGEO_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace rootgeo::cli {

// Runs one subcommand; the JSON report goes to `out`, diagnostics to `err`.
// Exit codes: 0 all checks passed (or informational report), 1 a check
// failed, 2 usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rootgeo::cli

#endif
