#ifndef FEEDSEP_CLI_HPP
#define FEEDSEP_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace feedsep {

/// Runs one command line (without the program name). Reports go to `out`,
/// diagnostics to `err`. Returns 0 on success, 1 for a flagged negative
/// finding (e.g. `audit --fail-on-violation`), 2 for usage, parse and
/// model errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace feedsep

#endif  // FEEDSEP_CLI_HPP
