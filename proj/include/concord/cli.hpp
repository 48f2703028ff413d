#pragma once

#include <iosfwd>

namespace concord {

/// Entry point of the command-line tool. Returns 0 on success, 1 on a usage
/// or input error, 2 when the requested quantity is undefined for the input.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace concord
