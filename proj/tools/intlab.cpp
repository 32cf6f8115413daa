#include "intlab/cli.hpp"

int main(int argc, char** argv) { return intlab::cli::main_entry(argc, argv); }
