#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace powerq::cli {

enum ExitCode : int {
    ok = 0,
    check_failed = 1,
    validation = 2,
    numeric = 3,
    expression = 4,
};

/// Runs one command line. args[0] is the program name. Reports go to `out`,
/// structured errors to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace powerq::cli
