#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace inoc {

/// Runs the inoc command line. Exit codes: 0 success, 2 usage error,
/// 3 domain error (inadmissible parameters, bad files), 4 size cap exceeded.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace inoc
