#pragma once

#include <iosfwd>

namespace vrect {

/// Runs the command line `argv` with CSV/report output on `out` (unless -o is
/// given) and diagnostics on `err`. Returns the process exit code: 0 on
/// success, 2 on invalid input, 3 on numerical failure.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Every file and CSV format the tool reads or writes.
const char* schema_text();

}  // namespace vrect
