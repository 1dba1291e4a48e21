#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lindbladkit::cli {

// Runs one command line (without the program name). Returns the process exit
// code: 0 success, 1 domain failure, 2 usage or parse failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lindbladkit::cli
