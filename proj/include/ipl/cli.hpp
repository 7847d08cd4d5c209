#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ipl::cli {

enum Exit : int {
    kOk = 0,        // proved, valid, accepted
    kNegative = 1,  // unprovable, invalid, rejected, unknown
    kUsage = 2,     // usage or parse error
};

/// Runs one command. `args` excludes the program name; "-" as a file reads `in`.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace ipl::cli
