#pragma once

#include <iosfwd>

namespace comptra::cli {

/// Exit codes: 0 success, 1 configuration or input error, 2 when a run
/// finished but at least one sentence recorded an error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace comptra::cli
