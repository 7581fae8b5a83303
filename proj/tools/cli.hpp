#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace grp::cli {

/// Runs one subcommand. Returns 0 on success, 2 on usage errors and 1 on
/// runtime errors (after writing a one-line error JSON to `err`).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        std::istream& in);

} // namespace grp::cli
