#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "coda/config.hpp"

namespace coda {

struct RunOptions {
  unsigned threads = 1;  // sweep/gallery workers; never changes the output bytes
  bool quiet = false;
};

// Executes config.command, writing its CSV files and `manifest.ini` into
// config.output_dir. Returns the written paths. Exceptions propagate.
std::vector<std::filesystem::path> run(const RunConfig& config, const RunOptions& options = {},
                                       std::ostream* log = nullptr);

// Command-line front end:
//   coda --config <path> [--seed <int>] [--out <dir>] [--threads <n>] [--quiet]
// Exit status 0 on success, 1 for configuration or precondition errors, 2 for
// runtime failures. Diagnostics go to `err`.
int run_cli(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace coda
