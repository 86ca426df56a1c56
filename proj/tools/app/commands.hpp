#pragma once

#include "params.hpp"
#include "report.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace cyield::app {

struct Command {
    std::string name;                   // config-file name, e.g. "perp-funding"
    std::vector<std::string> cli_path;  // subcommand words, e.g. {"perp", "funding"}
    std::string help;
    std::vector<Field> fields;
    Report (*run)(const Params&) = nullptr;
};

const std::vector<Command>& commands();
const Command* find_command(std::string_view name);

} // namespace cyield::app
