#pragma once

#include <ostream>

namespace orbcorr::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitNotConverged = 4;

/// Entry point shared by the executable and the tests.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace orbcorr::cli
