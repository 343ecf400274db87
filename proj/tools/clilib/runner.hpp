#pragma once

#include "clilib/config.hpp"

namespace fidmem::cli {

// Exit codes: 0 success, 1 configuration error, 2 numerical non-convergence
// (results still written; the offending points are flagged in the manifest).
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitNumerical = 2;

int run(const RunConfig& config);

} // namespace fidmem::cli
