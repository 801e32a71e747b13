#pragma once

#include <iosfwd>

namespace wamls::cli {

enum ExitCode : int { kOk = 0, kVerificationFailed = 1, kUsageError = 2, kResourceCap = 3 };

// Parses argv and dispatches a subcommand; never throws.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace wamls::cli
