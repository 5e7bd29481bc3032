#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace eas {

// Entry point behind the `eas` binary; exposed for in-process testing.
// argv excludes the program name. Exit codes: 0 success, 1 domain errors
// (validation diagnostics, abandoned chunks, scoring failures), 2 usage.
int run_cli(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

}  // namespace eas
