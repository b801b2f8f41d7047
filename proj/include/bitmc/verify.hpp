#pragma once

#include <cstdint>
#include <iosfwd>

namespace bitmc {

// Randomized property suite (norm inequalities, divergence bounds,
// projection contracts, closed-form cross-checks).  Prints one line per
// suite; returns false if any check fails.
bool run_verification(std::ostream& out, std::uint64_t seed = 20240501);

}  // namespace bitmc
