#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "hfv/config.hpp"

namespace hfv {

inline constexpr int kExitOk = 0;
inline constexpr int kExitViolation = 1;
inline constexpr int kExitConfig = 2;

std::vector<std::string> subcommand_names();

// Runs one subcommand; every file goes to config.output_dir. Returns the exit
// status: 0 success, 1 invariant violation or failed computation (a
// failure.json is written), 2 rejected configuration.
int dispatch(const std::string& subcommand, const RunConfig& config, std::ostream& log);

// `hfv <subcommand> <config>` entry point.
int cli_main(int argc, char** argv);

}  // namespace hfv
