#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace sparsetag {

/// Entry point for the `sparsetag` tool. `args` excludes the program name.
/// Returns 0 on success, 2 on bad flags or mismatched resources, 1 on
/// runtime failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sparsetag
