#pragma once

#include <iosfwd>

namespace curvedcomb::cli {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitDomain = 2;
inline constexpr int kExitVerify = 3;

/// Entry point of the curvedcomb tool; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace curvedcomb::cli
