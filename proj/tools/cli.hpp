#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sgnm::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kFailure = 1;     // a check failed or a library error occurred
inline constexpr int kUsage = 2;       // the command line did not validate
inline constexpr int kBudget = 3;      // an embedding search ran out of budget

// Runs one command. Artifacts go to the paths named by --out, or to `out` when none is given;
// warnings and the JSON error report go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sgnm::cli
