#pragma once

#include "gelfand/config.hpp"

#include <string>

namespace gelfand {

// Runs one subcommand, writing its outputs under out_dir (created if
// missing; partial files are removed on failure). Returns the process
// exit code: 0 success, 1 solver failure, 2 config error.
int dispatch(const std::string& subcommand, const RunConfig& cfg, const std::string& out_dir,
             int workers);

} // namespace gelfand
