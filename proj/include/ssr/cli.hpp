#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ssr {

// Entry point of the command line tool; returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ssr
