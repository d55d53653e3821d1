#include "pcgcn/cli.hpp"

int main(int argc, char** argv) { return pcgcn::cli::run(argc, argv); }
