#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace netspread::cli {

/// Parses and executes one command line; returns the process exit code.
int run(int argc, char** argv);

/// Same, with explicit streams (used by the tests).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// key=value lines to `--key=value` arguments. Blank lines and lines
/// starting with '#' are skipped. Throws std::runtime_error on a line
/// without '='.
std::vector<std::string> config_file_args(const std::string& text, const std::string& source);

}  // namespace netspread::cli
