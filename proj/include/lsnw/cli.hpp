#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lsnw {

//! Exit codes of the command line tool.
enum ExitCode : int
{
  kExitOk = 0,
  kExitUsage = 1,
  kExitComputation = 2
};

//! Entry point of the `lsnw` tool. `args` excludes the program name.
//! Diagnostics go to `err`; reports go to --out (stdout when absent).
int run_cli(const std::vector<std::string>& args, std::ostream& err);

int run_cli(int argc, const char* const* argv);

} // namespace lsnw
