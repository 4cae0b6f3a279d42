#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace peersel::cli {

// Exit codes are stable API: 0 success, 2 validation/infeasibility,
// 3 parse failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitParse = 3;

/// Runs one invocation (args exclude the program name). The tools/ binary
/// is a thin wrapper; tests drive this directly.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace peersel::cli
