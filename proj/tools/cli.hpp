#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cur::cli {

constexpr int kExitOk = 0;
constexpr int kExitArgument = 2;
constexpr int kExitNumerical = 3;

/// Runs the command line; never throws. Output goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace cur::cli
