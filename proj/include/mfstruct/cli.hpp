#pragma once

#include <string>
#include <vector>

namespace mfstruct::cli {

// Dispatch one CLI invocation. Returns the process exit code:
// 0 success, 1 verification failure, 2 usage error.
int run(const std::vector<std::string>& args);

}  // namespace mfstruct::cli
