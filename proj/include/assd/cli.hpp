#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace assd {

/// Subcommands: solve, experiment, plot, gen. Returns 0 on success, 1 on
/// bad usage, configuration or input errors, 2 on file I/O errors.
int cli_main(int argc, char** argv);

/// Same, with explicit arguments (without the program name) and streams.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace assd
