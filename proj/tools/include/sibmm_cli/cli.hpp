#pragma once

#include <iosfwd>

namespace sibmm::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;      // configuration, input or I/O problems
inline constexpr int kExitViolation = 2;  // results break an expected invariant

// Entry point of the `sibmm` command: bounds | curves | validate | oracle.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sibmm::cli
