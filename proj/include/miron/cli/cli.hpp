#pragma once

#include <iosfwd>

namespace miron::cli {

/// Exit codes of the `miron` tool.
enum Exit : int {
  kOk = 0,
  kFailure = 1,   // invalid model, failed scenario, engine fault
  kUsage = 2,     // bad command line
  kIoError = 3,   // unreadable input, missing or corrupt artifacts, bad config
};

/// Runs one command line. `in` feeds the `run` REPL.
int dispatch(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace miron::cli
