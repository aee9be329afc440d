#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lkpos::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitInconclusive = 3;

/// Runs one command line (args excludes the program name). Reports go to
/// out, diagnostics to err. Never throws.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lkpos::cli
