#pragma once

#include <iosfwd>

namespace elmiss {

// Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical failure.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace elmiss
