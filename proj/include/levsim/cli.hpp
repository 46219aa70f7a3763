#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace levsim {

// Exit codes: 0 success, 1 runtime failure, 2 usage/config error.
int dispatch(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err);

}  // namespace levsim
