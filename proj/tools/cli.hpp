#pragma once

#include <iosfwd>

namespace jointmeas::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitIoOrUsage = 2;

/// Entry point of the `jointmeas` tool. Reports go to `out`, diagnostics to
/// `err`; the return value is the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace jointmeas::cli
