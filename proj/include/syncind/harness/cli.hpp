#pragma once

namespace syncind::harness {

/// Exit codes: 0 ran (H0 accepted for the test subcommands), 2 H0 rejected,
/// 1 error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitRejected = 2;

int cli_main(int argc, char** argv);

}  // namespace syncind::harness
