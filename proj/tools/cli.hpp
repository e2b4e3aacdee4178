// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <ostream>

namespace ffp::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

// Entry point shared by the executable and the tests. Results go to `out`
// unless --out names a file; diagnostics go to `err`.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace ffp::cli
