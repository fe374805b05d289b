#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace distclust {

/// Exit codes: 0 success, 1 usage error, 2 data error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace distclust
