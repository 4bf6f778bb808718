#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qlsplab::cli {

/// Entry point of the `qlsplab` tool. Output goes to `out` unless --out names
/// a file; diagnostics go to `err`. Returns the process exit status.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Convenience overload for tests.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qlsplab::cli
