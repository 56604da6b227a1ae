#pragma once

#include <cstddef>
#include <ostream>

namespace ftag::harness {

/// Quick invariant suite. Prints one line per check and returns the number of failures.
std::size_t run_selftest(std::ostream& out);

} // namespace ftag::harness
