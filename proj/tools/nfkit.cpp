#include "nfkit/cli/commands.hpp"

int main(int argc, char** argv) { return nfkit::cli::main_entry(argc, argv); }
