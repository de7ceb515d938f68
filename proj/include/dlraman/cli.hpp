#pragma once

#include <iosfwd>

namespace dlraman {

/// Exit codes: 0 success, 1 usage/config error, 2 solver error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dlraman
