#ifndef ANDERSON_CLI_HPP
#define ANDERSON_CLI_HPP

#include <iostream>
#include <string>
#include <vector>

namespace anderson::cli {

// Runs one CLI invocation; argv excludes the program name.  Returns the
// process exit code: 0 ok, 2 parse, 3 validation, 4 computational, 5 internal.
int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

} // namespace anderson::cli

#endif
