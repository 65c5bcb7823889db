#pragma once
// Command-line front end, separated from main() so tests can drive it.
//
// Decision subcommands exit 0 when the property holds, 1 when a counter
// witness was found, 2 on usage or input errors.  Report subcommands exit 0
// once the report is produced; findings live in the report body.

#include <iosfwd>
#include <string>
#include <vector>

namespace nmlab {

int cli_run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nmlab
