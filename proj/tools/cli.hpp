#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace densecode::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitInvalid = 2;

/// Runs one `densecode` invocation. args[0] is the program name. Every
/// path returns one of the three exit codes above.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Worker cap from DENSECODE_THREADS, falling back to the hardware count.
int thread_cap();

}  // namespace densecode::cli
