#pragma once

#include <iosfwd>

namespace bvp {

// Full command-line driver; returns the process exit code (0 success,
// 1 assertion/numeric failure, 2 configuration error).  Streams are injected
// so tests can run subcommands in-process.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace bvp
