#pragma once

// Front end of the `mix` tool, callable in-process for tests.

#include <iosfwd>
#include <string>
#include <vector>

#include "mix/io.hpp"

namespace mix::cli {

/// Exit codes shared by every subcommand.
enum Exit : int {
  kMixable = 0,
  kNotMixable = 1,
  kUnknown = 2,
  kUsage = 3,
  kBudget = 4,
  kInput = 5,
  kVerification = 6,
};

/// Reads and validates a spec file. Throws SchemaError on bad content and
/// Error when the file cannot be read.
SpecFile parse_spec_file(const std::string& path, NumberMode mode = NumberMode::Auto);

/// Runs one command line (without the program name). The JSON report goes to
/// `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mix::cli
