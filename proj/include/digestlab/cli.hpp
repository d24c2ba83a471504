#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace digestlab::cli {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitNoModel = 2;

// Fallback seed when neither --seed nor DIGESTLAB_SEED is given.
inline constexpr unsigned long long kDefaultSeed = 12345;

// Runs `digestlab <subcommand> ...`; args excludes the program name.
// Subcommands: fit, score, simulate, pairs.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace digestlab::cli
