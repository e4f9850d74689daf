#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace seedaug::cli {

enum ExitCode { kOk = 0, kUsage = 1, kRuntime = 2 };

// Runs one invocation; args exclude the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace seedaug::cli
