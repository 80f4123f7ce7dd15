#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace opgeom::cli {

/// Runs one `opgeom` command. `args` excludes the program name. Returns 0 on
/// success, 1 for malformed input and 2 for numerical failures; errors are
/// reported on `err` as a single line "<CODE>: <message>".
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, char** argv);

}  // namespace opgeom::cli
