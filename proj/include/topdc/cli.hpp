#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace topdc {

enum ExitStatus : int { exit_ok = 0, exit_failure = 1, exit_parse_error = 2, exit_physics_error = 3 };

struct CliOptions {
  std::string command;  // rate, sweep, phasematch, bandwidth, overlap
  std::filesystem::path config;
  std::optional<std::filesystem::path> out;
  bool json = false;
  std::optional<std::uint64_t> seed;
  unsigned threads = 0;  // 0 = hardware concurrency
  bool verbose = false;
};

// Runs one subcommand. Reports go to the output directory; the summary goes to `out`.
int run(const CliOptions& options, std::ostream& out, std::ostream& err);

// Parses argv and dispatches to run().
int cli_main(int argc, char** argv);

}  // namespace topdc
