#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rootarr::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kUsage = 2;  // parse errors and invalid parameters
inline constexpr int kAmbiguous = 3;
inline constexpr int kInadmissible = 4;
inline constexpr int kSolverFailure = 5;
inline constexpr int kPartial = 6;

inline constexpr const char* kConfigEnv = "ROOTARR_CONFIG";

// Runs one command line (args excludes the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rootarr::cli
