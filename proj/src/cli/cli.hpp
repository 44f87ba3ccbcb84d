#pragma once

#include <iosfwd>

namespace grassgeo::cli {

/// Entry point of the grassgeo tool. Reads JSON input from `in` when the
/// command needs it and no --input/--random is given. Returns the process
/// exit status: 0 success, 1 domain error, 2 usage error.
int run(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace grassgeo::cli
