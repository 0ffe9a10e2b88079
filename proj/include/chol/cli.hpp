#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "chol/error.hpp"

namespace chol::cli {

// Process exit statuses.
//   0  success
//   1  internal failure: a computation contradicted what must hold
//   2  expected negative result (point off the open orbit, nonzero
//      obstruction, filtration rejected, loop not usable)
//   3  malformed input, including a matrix outside the requested space
//   4  command line usage error
enum ExitCode : int { kOk = 0, kInternal = 1, kNegative = 2, kMalformed = 3, kUsage = 4 };

int exit_code(ErrorKind kind);

// Runs one command. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct ReproLine {
  std::string text;
  bool pass;
};

// Regenerates one of the reference tables: "2", "example-4.4" or "lambda".
std::vector<ReproLine> reproduce(const std::string& table, std::uint64_t seed);

}  // namespace chol::cli
