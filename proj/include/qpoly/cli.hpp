#pragma once

#include <iosfwd>

namespace qpoly {

/// Entry point behind the qpoly binary; in-process for testability.
/// Exit codes: 0 success/PASS, 1 any FAIL or INCONCLUSIVE verdict,
/// 2 invalid input, 3 I/O failure.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qpoly
