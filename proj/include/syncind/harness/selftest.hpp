#pragma once

#include <ostream>

namespace syncind::harness {

/// Hand-derived oracle checks across all modules. Prints one line per check
/// and returns true iff every check passes.
[[nodiscard]] bool run_selftest(std::ostream& out);

}  // namespace syncind::harness
