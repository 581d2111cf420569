#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fraclimit::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitValidation = 2;

/// Runs one command line. args excludes the program name. Results go to out
/// (or the --output file), diagnostics to err as one JSON object per line.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fraclimit::cli
