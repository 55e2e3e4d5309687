#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dioph::cli {

// Full command dispatch, in-process. Returns the process exit status:
// 0 success, 1 domain failure (JSON on stdout with --error-json), 2 usage.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace dioph::cli
