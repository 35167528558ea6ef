#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace quadtmf::cli {

/// Runs the command line `args` (without the program name). Reports go to
/// `out`; errors go to `err` as JSON. Returns 0 on success, 1 on a domain
/// error and 2 on a usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace quadtmf::cli
