#pragma once

#include "config.hpp"

namespace heis_cli {

struct CommandResult {
    int exit_code = 0;
    json tolerances = json::object();
};

// runs one command, writing its artifacts; hypothesis violations are reported through exit_code 2
CommandResult dispatch(const RunConfig& cfg, Artifacts& out);

}  // namespace heis_cli
