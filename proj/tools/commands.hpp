#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bihamo {

// Full command dispatch for the bihamo tool, callable in-process.  args are
// the words after the program name.  Exit code 0 on success, 1 on a
// mathematical failure (nonzero residual, failed validation, flagged
// invariants), 2 on usage or parse errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bihamo
