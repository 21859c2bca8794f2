#pragma once

#include <iosfwd>

namespace hopfavg {

/// Exit codes: 0 every comparison passed, 1 a comparison failed or a stage
/// could not complete, 2 usage or config error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hopfavg
