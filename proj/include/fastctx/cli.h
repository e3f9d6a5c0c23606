#ifndef FASTCTX_CLI_H_
#define FASTCTX_CLI_H_

#include <istream>
#include <ostream>

namespace fastctx::cli {

enum ExitCode : int {
  kOk = 0,
  kAssertionFailed = 1,
  kRuleError = 2,
  kDataError = 3,
};

// Entry point of the fastctx tool. '-' paths refer to `in` / `out`; data goes
// to `out` and diagnostics to `err`.
int Run(int argc, const char* const* argv, std::istream& in, std::ostream& out,
        std::ostream& err);

}  // namespace fastctx::cli

#endif  // FASTCTX_CLI_H_
