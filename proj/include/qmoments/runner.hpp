#pragma once

#include <iosfwd>

#include "qmoments/config.hpp"

namespace qmoments {

// Exit codes: 0 success, 1 integration failure, 2 verification failure,
// 3 configuration error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitIntegration = 1;
inline constexpr int kExitVerification = 2;
inline constexpr int kExitConfig = 3;

// Dispatches the run, writing results to spec.out_path (stdout when empty)
// and human-readable status to `log`.
int run(const RunSpec& spec, std::ostream& log);

}  // namespace qmoments
