#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace panotrack::cli {

enum ExitCode { kOk = 0, kCheckFailed = 1, kUsage = 2 };

/// Runs one pano-track invocation; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace panotrack::cli
