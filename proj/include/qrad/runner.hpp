#pragma once

#include <string>
#include <vector>

#include "qrad/config.hpp"
#include "qrad/errors.hpp"

namespace qrad {

const std::vector<std::string>& subcommands();

struct RunResult {
  bool pass = false;
  std::vector<std::string> files;  // written paths, relative to config.out
  std::string summary;  // JSON summary text
};

// Runs one experiment and writes <sub>.csv, <sub>.json and manifest.json
// under config.out. Unknown subcommands throw std::invalid_argument.
RunResult run(const ExperimentConfig& config, const std::string& subcommand);

// Process exit status for a finished run: 0 pass, 2 threshold failure.
int exit_status(const RunResult& result);
// Exit status for an error kind: 3 configuration, 4 numerical resolution.
int exit_status(ErrorKind kind);

}  // namespace qrad
