#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace presb::cli {

/// Runs one invocation; args excludes the program name. Verdicts go to `out`;
/// the return value is 0 on success and 2 on usage or operational errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace presb::cli
