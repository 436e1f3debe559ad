#include "blepi/cli.hpp"

int main(int argc, char** argv) { return blepi::cli::main_cli(argc, argv); }
