#pragma once

#include <ostream>

namespace wdd::cli {

// Exit codes: 0 success, 2 invalid input, 3 numerical failure.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace wdd::cli
