#include "jdrisk/cli/run.hpp"

int main(int argc, char** argv) { return jdrisk::cli::run_cli(argc, argv); }
