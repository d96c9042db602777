#pragma once

#include <string>
#include <vector>

namespace heis_cli {

// argv[0] is the program name; returns 0 on success, 2 on a hypothesis violation, 1 on errors
int run(const std::vector<std::string>& argv);

}  // namespace heis_cli
