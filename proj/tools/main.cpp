#include "rothevi_cli/cli.hpp"

int main(int argc, char** argv) { return rothevi::cli::run_command(argc, argv); }
