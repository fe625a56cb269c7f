#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace freeconv::cli {

/// Exit codes: 0 success, 1 usage error, 2 numerical failure.
/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace freeconv::cli
