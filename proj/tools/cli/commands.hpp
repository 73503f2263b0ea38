#pragma once

#include <ostream>

namespace ncho::cli {

enum ExitCode { kOk = 0, kSchema = 2, kContract = 3, kSolver = 4 };

// Parses argv, runs one subcommand and writes its output to `out` (or --out FILE).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ncho::cli
