#pragma once

#include <string>

#include "koitervi/config.hpp"

namespace koitervi {

/// Executes one CLI command against a parsed config, writing report files
/// into out_dir.  Returns the process exit status; failures print one
/// categorized "error: <category>: <message>" line to stderr.
int run_command(const std::string& command, const RunConfig& cfg, const std::string& out_dir);

}  // namespace koitervi
