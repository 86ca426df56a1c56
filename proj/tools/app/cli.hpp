#pragma once

#include "commands.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace cyield::app {

inline constexpr const char* kToolName = "cryptoyield";
inline constexpr const char* kToolVersion = "0.1.0";

// Runs `command` on `params` (validated, defaults filled) and stamps provenance
// into the summary. Throws DataError listing every diagnostic when invalid.
Report execute(const Command& command, const json& params, const std::filesystem::path& base, std::uint64_t seed);

// Diagnostics for a config file: a single scenario or a pack of scenarios.
std::vector<std::string> validate_config(const std::filesystem::path& config);

// Full command line without the program name. Returns the process exit code:
// 0 success, 2 input or state error, 3 numeric failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace cyield::app
