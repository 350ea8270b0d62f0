#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace steinchaos::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitAssertion = 2;

/// Runs one command line (args excludes the program name). Reports go to `out`
/// unless --output names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Seed used when --seed is absent: $STEINCHAOS_SEED if set, else 42.
unsigned long long default_seed();

}  // namespace steinchaos::cli
