#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tyche::cli {

enum ExitStatus : int {
  kOk = 0,
  kUsage = 1,
  kCompileError = 2,
  kDenied = 3,
  kDataError = 4,
};

/// Runs one `tyche` invocation. `args` excludes the program name.
int dispatch(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace tyche::cli
