#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nabla::cli {

enum ExitCode : int {
    kOk = 0,
    kDomain = 1,
    kParse = 2,
    kInconclusive = 3,
    kSuiteFailed = 4,
};

/// Runs one invocation. `args` excludes the program name. The result
/// document goes to `out`, a one-line reason for a nonzero exit to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace nabla::cli
