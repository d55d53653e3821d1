#pragma once

#include <string>
#include <vector>

namespace pcgcn::cli {

// Subcommands: generate | solve | train | eval | gap-plot | inspect.
// Exit codes: 0 success, 1 usage error, 2 data/format error.
int run(int argc, char** argv);
int run(const std::vector<std::string>& args);  // args without the program name

}  // namespace pcgcn::cli
