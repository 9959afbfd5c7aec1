#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace emolex::cli {

inline constexpr const char* version = "0.1.0";

// Runs one command line (without the program name). Returns the process exit
// code: 0 success, 1 runtime failure, 2 usage or input error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace emolex::cli
