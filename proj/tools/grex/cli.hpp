#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace grex::cli {

enum ExitCode : int {
  kSuccess = 0,
  kUsageError = 1,
  kDataError = 2,
  kIoError = 3,
};

/// Runs one grex invocation. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace grex::cli
